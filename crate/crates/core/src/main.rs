fn main() {
    std::process::exit(fmb_core::cli::run(std::env::args_os()));
}
