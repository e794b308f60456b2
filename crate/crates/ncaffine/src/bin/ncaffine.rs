use ncaffine::cli;

fn main() {
    std::process::exit(cli::run_args(std::env::args_os()));
}
