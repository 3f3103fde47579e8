fn main() {
    std::process::exit(miso_dof::cli::main_with(std::env::args_os()));
}
