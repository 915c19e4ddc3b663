//! A protocol-conformant client without rendering.
//!
//! [`ClientMirror`] applies server batches with the same scene and GUI state
//! machines the server uses. [`HeadlessClient`] drives a mirror over a real
//! WebSocket, optionally with simulated latency.

mod client;
mod mirror;

pub use client::{ClientStats, ConnectOptions, HeadlessClient, HeadlessError};
pub use mirror::{canonical_state, ClientMirror, MirrorError};
