fn main() {
    std::process::exit(debye_screen::cli::run(std::env::args_os()));
}
