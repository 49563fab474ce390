fn main() {
    std::process::exit(bmhd_harness::run_cli(std::env::args_os()));
}
