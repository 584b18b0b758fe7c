//! Command dispatch, file I/O, and report emission.

pub mod files;

/// Placeholder entry point; full dispatch lands with the subcommands.
pub fn run<I, T>(_args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    2
}
