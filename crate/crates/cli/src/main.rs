fn main() {
    std::process::exit(scramble_verify::main_with_args(std::env::args_os()));
}
