fn main() {
    std::process::exit(evtree::cli::run(std::env::args_os()));
}
