fn main() {
    std::process::exit(lrtrap_cli::run(std::env::args_os()));
}
