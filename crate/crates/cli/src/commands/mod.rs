//! One module per subcommand; each exposes `run(&Args) -> CmdResult`.

pub mod bench;
pub mod model;
pub mod optimize;
pub mod render;
pub mod verify;
