fn main() {
    std::process::exit(weylsum::harness::cli_dispatch(std::env::args_os()));
}
