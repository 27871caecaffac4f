fn main() {
    // Die quietly on closed pipes like the usual line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(hgkit_cli::run(std::env::args()));
}
