fn main() {
    std::process::exit(pt_liouville_cli::run_command(std::env::args_os()));
}
