//! Server-side 3D visualization: a scene graph and GUI registry mirrored to
//! connected clients over a batched, flow-controlled WebSocket protocol.

pub mod gui;
pub mod props;
pub mod protocol;
pub mod scene;
pub mod schema;
pub mod transport;
pub mod headless;
pub mod api;
pub mod demos;
