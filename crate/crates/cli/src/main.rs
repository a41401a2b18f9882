fn main() {
    std::process::exit(s2f_cli::run(std::env::args_os()));
}
