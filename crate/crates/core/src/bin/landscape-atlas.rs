fn main() {
    std::process::exit(landscape_atlas::cli::run(std::env::args_os()));
}
