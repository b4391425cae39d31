fn main() {
    std::process::exit(grpf_cli::main_with(std::env::args_os()));
}
