//! The JSON relation file format.

/// Format version accepted by the parser.
pub const FORMAT_VERSION: u32 = 1;
