fn main() {
    std::process::exit(ffmem::cli::main_with_args(std::env::args_os()));
}
