fn main() {
    std::process::exit(staticgeom::cli::run(std::env::args_os()));
}
