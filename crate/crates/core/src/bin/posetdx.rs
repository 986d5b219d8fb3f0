fn main() {
    std::process::exit(poset_derived::cli::run(std::env::args_os()));
}
