fn main() {
    std::process::exit(rqcd_cli::cli_main(std::env::args_os()));
}
