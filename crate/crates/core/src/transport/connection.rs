use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Duration;

use crate::gui::GuiRegistry;
use crate::protocol::{CameraState, Wire};
use crate::scene::SceneGraph;
use crate::schema::{self, Message};

use super::buffer::PersistentBuffer;
use super::TransportError;

/// Maximum number of unacknowledged batches per connection.
pub const WINDOW: usize = 2;

pub const FLUSH_INTERVAL: Duration = Duration::from_millis(20);

/// Server-side state of one accepted client.
#[derive(Debug)]
pub struct ClientConnection {
    client_id: u64,
    pending: PersistentBuffer,
    overlay: PersistentBuffer,
    in_flight: BTreeSet<u64>,
    next_seq: u64,
    pub camera: Option<CameraState>,
    /// Objects created through this client's own facades.
    pub scene: SceneGraph,
    pub gui: GuiRegistry,
}

impl ClientConnection {
    pub fn new(client_id: u64) -> Self {
        Self {
            client_id,
            pending: PersistentBuffer::outbound(),
            overlay: PersistentBuffer::persistent(),
            in_flight: BTreeSet::new(),
            next_seq: 1,
            camera: None,
            scene: SceneGraph::new(),
            gui: GuiRegistry::new(),
        }
    }

    pub fn client_id(&self) -> u64 {
        self.client_id
    }

    pub fn pending(&self) -> &PersistentBuffer {
        &self.pending
    }

    pub fn overlay(&self) -> &PersistentBuffer {
        &self.overlay
    }

    pub fn outstanding(&self) -> usize {
        self.in_flight.len()
    }

    pub fn next_seq(&self) -> u64 {
        self.next_seq
    }

    /// Queues a message for this client only, without persisting it.
    pub fn enqueue(&mut self, wire: Arc<Wire>) {
        self.pending.apply(wire);
    }

    /// Queues a message and records it in this client's overlay.
    pub fn persist(&mut self, wire: Arc<Wire>) {
        self.overlay.apply(wire.clone());
        self.pending.apply(wire);
    }

    /// A broadcast removal also clears matching overlay entries.
    pub(crate) fn purge_overlay(&mut self, wire: &Wire) {
        self.overlay.apply_purges_only(wire);
    }

    /// Takes everything pending as the next batch, if the window allows.
    pub fn take_batch(&mut self) -> Option<(u64, Vec<Arc<Wire>>)> {
        if self.pending.is_empty() || self.in_flight.len() >= WINDOW {
            return None;
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.in_flight.insert(seq);
        Some((seq, self.pending.drain()))
    }

    /// [`ClientConnection::take_batch`] followed by encoding.
    pub fn flush_tick(&mut self) -> Result<Option<(u64, Vec<u8>)>, TransportError> {
        match self.take_batch() {
            None => Ok(None),
            Some((seq, msgs)) => encode_frame(seq, &msgs).map(|f| Some((seq, f))),
        }
    }

    /// Releases a window slot. Unknown and repeated acks are ignored.
    pub fn on_ack(&mut self, seq: u64) -> bool {
        let known = self.in_flight.remove(&seq);
        if !known {
            tracing::warn!(client = self.client_id, seq, "ack for unknown batch");
        }
        known
    }
}

pub fn encode_frame(seq: u64, messages: &[Arc<Wire>]) -> Result<Vec<u8>, TransportError> {
    let msgs = messages
        .iter()
        .map(|w| w.to_message())
        .collect::<Result<Vec<Message>, _>>()?;
    Ok(schema::encode_batch(seq, &msgs)?)
}
