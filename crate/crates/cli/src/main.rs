fn main() {
    std::process::exit(gds_cli::run(std::env::args_os()));
}
