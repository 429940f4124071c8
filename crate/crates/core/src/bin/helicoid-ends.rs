fn main() {
    std::process::exit(helicoid_ends::cli::run(std::env::args_os()));
}
