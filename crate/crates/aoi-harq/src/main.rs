fn main() {
    // Die quietly when a downstream pipe closes, like other unix filters.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::init();
    std::process::exit(aoi_harq::cli::run());
}
