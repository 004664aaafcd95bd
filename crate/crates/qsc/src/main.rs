fn main() {
    // Die quietly on closed pipes (e.g. `qsc qchar .. | head`) instead of
    // panicking in println!.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(qsc::cli::real_main(std::env::args_os()));
}
