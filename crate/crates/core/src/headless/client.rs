use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use futures_util::{SinkExt, StreamExt};
use parking_lot::{Condvar, Mutex};
use thiserror::Error;
use tokio::sync::{mpsc, watch};
use tokio_tungstenite::tungstenite::protocol::WebSocketConfig;
use tokio_tungstenite::tungstenite::Message as WsMessage;

use crate::gui::Uid;
use crate::protocol::{CameraState, Wire};
use crate::scene::ScenePath;
use crate::schema::{self, Value};

use super::mirror::{ClientMirror, MirrorError};

const CONNECT_TIMEOUT: Duration = Duration::from_secs(10);
const CAMERA_REPORT_INTERVAL: Duration = Duration::from_millis(33);
const MAX_FRAME_BYTES: usize = 256 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeadlessError {
    #[error("cannot connect to {url}: {reason}")]
    Connect { url: String, reason: String },
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error("timed out after {0:?}")]
    Timeout(Duration),
    #[error("connection closed: {0}")]
    Closed(String),
}

#[derive(Debug, Clone)]
pub struct ConnectOptions {
    /// Simulated round trip: each batch is applied after half of it and
    /// acknowledged after the other half.
    pub rtt: Duration,
    /// Overrides the schema hash sent in `Hello`.
    pub schema_hash: Option<String>,
}

impl Default for ConnectOptions {
    fn default() -> Self {
        Self {
            rtt: Duration::ZERO,
            schema_hash: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClientStats {
    pub frames_received: u64,
    pub messages_received: u64,
    pub bytes_received: u64,
    pub acks_sent: u64,
}

#[derive(Debug, Default)]
struct State {
    mirror: ClientMirror,
    stats: ClientStats,
    /// Set once the session ends, with the reason.
    closed: Option<HeadlessError>,
}

struct Shared {
    state: Mutex<State>,
    changed: Condvar,
}

impl Shared {
    fn update(&self, f: impl FnOnce(&mut State)) {
        f(&mut self.state.lock());
        self.changed.notify_all();
    }

    fn close(&self, err: HeadlessError) {
        self.update(|s| {
            s.closed.get_or_insert(err);
        });
    }
}

enum Command {
    Send(Vec<u8>),
    Close,
}

/// A rendering-free client: keeps a [`ClientMirror`] in sync with a server
/// and sends GUI, click and camera messages on request.
pub struct HeadlessClient {
    shared: Arc<Shared>,
    commands: mpsc::UnboundedSender<Command>,
    camera: watch::Sender<Option<CameraState>>,
    thread: Option<JoinHandle<()>>,
    client_id: u64,
}

impl HeadlessClient {
    pub fn connect(url: &str) -> Result<Self, HeadlessError> {
        Self::connect_with(url, ConnectOptions::default())
    }

    /// Connects and blocks until the handshake completes.
    pub fn connect_with(url: &str, options: ConnectOptions) -> Result<Self, HeadlessError> {
        let shared = Arc::new(Shared {
            state: Mutex::new(State::default()),
            changed: Condvar::new(),
        });
        let (commands, command_rx) = mpsc::unbounded_channel();
        let (camera, camera_rx) = watch::channel(None);
        let runtime = tokio::runtime::Builder::new_current_thread()
            .enable_all()
            .build()
            .map_err(|e| HeadlessError::Connect {
                url: url.to_owned(),
                reason: e.to_string(),
            })?;
        let session_shared = shared.clone();
        let session_commands = commands.clone();
        let url_owned = url.to_owned();
        let thread = std::thread::Builder::new()
            .name("scenecast-headless".into())
            .spawn(move || {
                runtime.block_on(run_session(
                    url_owned,
                    options,
                    session_shared,
                    session_commands,
                    command_rx,
                    camera_rx,
                ));
            })
            .map_err(|e| HeadlessError::Connect {
                url: url.to_owned(),
                reason: e.to_string(),
            })?;

        let mut client = Self {
            shared,
            commands,
            camera,
            thread: Some(thread),
            client_id: 0,
        };
        let deadline = Instant::now() + CONNECT_TIMEOUT;
        let mut state = client.shared.state.lock();
        loop {
            if let Some(id) = state.mirror.client_id {
                client.client_id = id;
                break;
            }
            if let Some(err) = &state.closed {
                let err = err.clone();
                drop(state);
                client.close();
                return Err(err);
            }
            if client.shared.changed.wait_until(&mut state, deadline).timed_out() {
                drop(state);
                client.close();
                return Err(HeadlessError::Timeout(CONNECT_TIMEOUT));
            }
        }
        drop(state);
        Ok(client)
    }

    pub fn client_id(&self) -> u64 {
        self.client_id
    }

    /// A copy of the current mirror.
    pub fn mirror(&self) -> ClientMirror {
        self.shared.state.lock().mirror.clone()
    }

    pub fn with_mirror<R>(&self, f: impl FnOnce(&ClientMirror) -> R) -> R {
        f(&self.shared.state.lock().mirror)
    }

    pub fn canonical_state(&self) -> String {
        self.with_mirror(ClientMirror::canonical_state)
    }

    pub fn stats(&self) -> ClientStats {
        self.shared.state.lock().stats
    }

    /// Why the session ended, if it has.
    pub fn error(&self) -> Option<HeadlessError> {
        self.shared.state.lock().closed.clone()
    }

    /// Blocks until `pred` holds for the mirror. Returns false on timeout
    /// or when the session ends first.
    pub fn wait_until(&self, timeout: Duration, pred: impl Fn(&ClientMirror) -> bool) -> bool {
        let deadline = Instant::now() + timeout;
        let mut state = self.shared.state.lock();
        loop {
            if pred(&state.mirror) {
                return true;
            }
            if state.closed.is_some() || self.shared.changed.wait_until(&mut state, deadline).timed_out() {
                return pred(&state.mirror);
            }
        }
    }

    fn send(&self, wire: Wire) -> Result<(), HeadlessError> {
        let frame = wire
            .to_message()
            .map_err(MirrorError::from)
            .and_then(|m| schema::encode_batch(0, &[m]).map_err(MirrorError::from))?;
        self.send_raw(frame)
    }

    /// Sends an arbitrary frame, bypassing encoding.
    pub fn send_raw(&self, frame: Vec<u8>) -> Result<(), HeadlessError> {
        self.commands
            .send(Command::Send(frame))
            .map_err(|_| self.error().unwrap_or(HeadlessError::Closed("session ended".into())))
    }

    /// Reports a GUI value change; for buttons any value counts as a click.
    pub fn send_gui_update(&self, uid: Uid, value: Value) -> Result<(), HeadlessError> {
        self.send(Wire::GuiUpdate { uid, value })
    }

    pub fn click_button(&self, uid: Uid) -> Result<(), HeadlessError> {
        self.send_gui_update(uid, Value::Bool(true))
    }

    pub fn click_node(&self, path: &ScenePath, ray_origin: [f64; 3], ray_direction: [f64; 3]) -> Result<(), HeadlessError> {
        self.send(Wire::SceneClick {
            path: path.clone(),
            ray_origin,
            ray_direction,
            screen_pos: [0.5, 0.5],
        })
    }

    /// Queues a camera report. Reports are throttled to about 30 per second;
    /// only the latest queued state is sent.
    pub fn report_camera(&self, camera: CameraState) {
        let _ = self.camera.send(Some(camera));
    }

    pub fn close(&mut self) {
        let _ = self.commands.send(Command::Close);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for HeadlessClient {
    fn drop(&mut self) {
        self.close();
    }
}

async fn run_session(
    url: String,
    options: ConnectOptions,
    shared: Arc<Shared>,
    commands: mpsc::UnboundedSender<Command>,
    mut command_rx: mpsc::UnboundedReceiver<Command>,
    mut camera_rx: watch::Receiver<Option<CameraState>>,
) {
    let config = WebSocketConfig::default()
        .max_message_size(Some(MAX_FRAME_BYTES))
        .max_frame_size(Some(MAX_FRAME_BYTES));
    let ws = match tokio_tungstenite::connect_async_with_config(url.as_str(), Some(config), true).await {
        Ok((ws, _)) => ws,
        Err(e) => {
            shared.close(HeadlessError::Connect {
                url,
                reason: e.to_string(),
            });
            return;
        }
    };
    let (mut sink, mut stream) = ws.split();

    let hash = options
        .schema_hash
        .clone()
        .unwrap_or_else(|| schema::builtin_schema_hash().to_owned());
    let hello = Wire::Hello { schema_hash: hash }
        .to_message()
        .expect("hello is representable");
    let hello = schema::encode_batch(0, &[hello]).expect("hello encodes");
    if let Err(e) = sink.send(WsMessage::Binary(hello.into())).await {
        shared.close(HeadlessError::Closed(e.to_string()));
        return;
    }

    let half = options.rtt / 2;
    let (deliver_tx, mut deliver_rx) = mpsc::unbounded_channel::<(Instant, Vec<u8>)>();
    let (ack_tx, mut ack_rx) = mpsc::unbounded_channel::<(Instant, u64)>();

    let apply_shared = shared.clone();
    let applier = tokio::spawn(async move {
        while let Some((at, frame)) = deliver_rx.recv().await {
            tokio::time::sleep_until(at.into()).await;
            let outcome = schema::decode_batch(&frame)
                .map_err(MirrorError::from)
                .and_then(|batch| {
                    let mut state = apply_shared.state.lock();
                    let seq = batch.seq;
                    let n = batch.messages.len() as u64;
                    let result = if seq == 0 {
                        batch
                            .messages
                            .iter()
                            .try_for_each(|m| state.mirror.apply(&Wire::from_message(m)?))
                    } else {
                        state.mirror.apply_batch(&batch)
                    };
                    state.stats.frames_received += 1;
                    state.stats.messages_received += n;
                    state.stats.bytes_received += frame.len() as u64;
                    result.map(|_| seq)
                });
            apply_shared.changed.notify_all();
            match outcome {
                Ok(0) => {}
                Ok(seq) => {
                    let _ = ack_tx.send((Instant::now() + half, seq));
                }
                Err(e) => {
                    apply_shared.close(HeadlessError::Mirror(e));
                    return;
                }
            }
        }
    });

    let ack_shared = shared.clone();
    let ack_commands = commands.clone();
    let acker = tokio::spawn(async move {
        while let Some((at, seq)) = ack_rx.recv().await {
            tokio::time::sleep_until(at.into()).await;
            let msg = Wire::Ack { seq }.to_message().expect("ack is representable");
            let frame = schema::encode_batch(0, &[msg]).expect("ack encodes");
            if ack_commands.send(Command::Send(frame)).is_err() {
                return;
            }
            ack_shared.update(|s| s.stats.acks_sent += 1);
        }
    });

    let camera_commands = commands.clone();
    let camera_task = tokio::spawn(async move {
        while camera_rx.changed().await.is_ok() {
            let latest = *camera_rx.borrow_and_update();
            if let Some(cam) = latest {
                let msg = Wire::CameraReport(cam).to_message().expect("camera is representable");
                if let Ok(frame) = schema::encode_batch(0, &[msg]) {
                    if camera_commands.send(Command::Send(frame)).is_err() {
                        return;
                    }
                }
            }
            tokio::time::sleep(CAMERA_REPORT_INTERVAL).await;
        }
    });

    let mut server_closed = false;
    loop {
        tokio::select! {
            cmd = command_rx.recv() => match cmd {
                Some(Command::Send(frame)) => {
                    if let Err(e) = sink.send(WsMessage::Binary(frame.into())).await {
                        shared.close(HeadlessError::Closed(e.to_string()));
                        break;
                    }
                }
                Some(Command::Close) | None => {
                    let _ = sink.send(WsMessage::Close(None)).await;
                    shared.close(HeadlessError::Closed("closed by client".into()));
                    break;
                }
            },
            incoming = stream.next() => match incoming {
                Some(Ok(WsMessage::Binary(bytes))) => {
                    let _ = deliver_tx.send((Instant::now() + half, bytes.to_vec()));
                }
                Some(Ok(WsMessage::Close(_))) | None => {
                    server_closed = true;
                    break;
                }
                Some(Err(e)) => {
                    shared.close(HeadlessError::Closed(e.to_string()));
                    break;
                }
                Some(Ok(_)) => {}
            }
        }
    }
    if server_closed {
        drop(deliver_tx);
        let _ = applier.await;
        shared.close(HeadlessError::Closed("closed by server".into()));
    } else {
        applier.abort();
    }
    acker.abort();
    camera_task.abort();
}
