fn main() {
    std::process::exit(bicyclic_cli::run(std::env::args_os()));
}
