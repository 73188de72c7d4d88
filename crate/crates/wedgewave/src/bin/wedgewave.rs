fn main() {
    std::process::exit(wedgewave::cli::run(std::env::args_os()));
}
