fn main() {
    std::process::exit(exact_recovery::cli::cli_main(std::env::args_os()));
}
