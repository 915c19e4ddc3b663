//! Buffering, deduplication, flow control and the WebSocket server.
//!
//! [`Hub`] is the sans-IO core; [`server`] drives it from sockets.

mod buffer;
mod connection;
mod hub;
pub mod server;

use thiserror::Error;

pub use buffer::{redundancy_key, snapshot_for_new_client, BufferMode, KeyClass, PersistentBuffer, RedundancyKey};
pub use connection::{encode_frame, ClientConnection, FLUSH_INTERVAL, WINDOW};
pub use hub::{ClickEvent, Hub, HubEvent, Scope};

use crate::gui::GuiError;
use crate::protocol::ProtocolError;
use crate::scene::SceneError;
use crate::schema::CodecError;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Gui(#[from] GuiError),
    #[error("client {0} is not connected")]
    UnknownClient(u64),
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to start the server runtime: {0}")]
    Runtime(#[source] std::io::Error),
}
