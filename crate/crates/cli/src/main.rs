fn main() {
    std::process::exit(bellcopies_cli::run(std::env::args_os()));
}
