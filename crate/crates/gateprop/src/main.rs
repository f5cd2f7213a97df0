fn main() {
    std::process::exit(gateprop::cli::run(std::env::args_os()));
}
