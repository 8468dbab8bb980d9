use clap::Parser;

fn main() {
    // Die quietly on a closed pipe (e.g. `pattern-fft pattern ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let config = pattern_fft::cli::RunConfig::parse();
    if let Err(err) = pattern_fft::cli::run(&config) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
