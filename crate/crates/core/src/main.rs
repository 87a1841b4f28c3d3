fn main() {
    std::process::exit(cuminfo::cli::main_with(std::env::args_os()));
}
