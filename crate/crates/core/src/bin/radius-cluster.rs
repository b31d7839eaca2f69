fn main() {
    std::process::exit(radius_cluster::cli::run(std::env::args_os()));
}
