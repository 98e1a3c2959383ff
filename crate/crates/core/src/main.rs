fn main() {
    std::process::exit(satotate_core::cli::run_cli(std::env::args_os()));
}
