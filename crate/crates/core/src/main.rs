fn main() {
    std::process::exit(cws_cluster::cli::run(std::env::args_os()));
}
