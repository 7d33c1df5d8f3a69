fn main() {
    std::process::exit(scoregeom::cli::run(std::env::args_os()));
}
