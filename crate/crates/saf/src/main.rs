use std::process::exit;

fn main() {
    exit(saf::cli::run());
}
