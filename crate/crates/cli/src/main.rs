fn main() {
    std::process::exit(dressed_atom_cli::main_with(std::env::args_os()));
}
