fn main() {
    std::process::exit(circle_reeb_cli::run(std::env::args_os()));
}
