fn main() {
    std::process::exit(surfpoints_cli::run(std::env::args_os()));
}
