//! WebSocket and HTTP serving around a shared [`Hub`].

use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use axum::extract::ws::{Message as WsMessage, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use parking_lot::Mutex;
use tokio::sync::oneshot;

use crate::protocol::Wire;
use crate::schema;

use super::connection::{encode_frame, FLUSH_INTERVAL};
use super::hub::{Hub, HubEvent};
use super::TransportError;

pub const DEFAULT_HOST: &str = "127.0.0.1";
pub const DEFAULT_PORT: u16 = 8080;

const HELLO_TIMEOUT: Duration = Duration::from_secs(10);
const MAX_FRAME_BYTES: usize = 256 << 20;
const INDEX_HTML: &str = include_str!("../../assets/index.html");

pub type EventSink = Arc<dyn Fn(HubEvent) + Send + Sync>;

#[derive(Clone)]
struct AppState {
    hub: Arc<Mutex<Hub>>,
    sink: EventSink,
}

/// A server running on its own runtime thread. Dropping it stops the
/// listener and closes every connection.
pub struct Running {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<()>>,
}

impl Running {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn stop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for Running {
    fn drop(&mut self) {
        self.stop();
    }
}

pub fn router(hub: Arc<Mutex<Hub>>, sink: EventSink) -> Router {
    Router::new()
        .route("/", get(|| async { Html(INDEX_HTML) }))
        .route("/healthz", get(|| async { "ok" }))
        .route("/ws", get(ws_handler))
        .with_state(AppState { hub, sink })
}

/// Binds `host:port` synchronously, then serves on a background thread.
/// Port 0 picks a free port; see [`Running::local_addr`].
pub fn serve(host: &str, port: u16, hub: Arc<Mutex<Hub>>, sink: EventSink) -> Result<Running, TransportError> {
    let bind_err = |source| TransportError::Bind {
        addr: format!("{host}:{port}"),
        source,
    };
    let listener = std::net::TcpListener::bind((host, port)).map_err(bind_err)?;
    listener.set_nonblocking(true).map_err(bind_err)?;
    let addr = listener.local_addr().map_err(bind_err)?;

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(2)
        .thread_name("scenecast-io")
        .enable_all()
        .build()
        .map_err(TransportError::Runtime)?;
    let (shutdown, stopped) = oneshot::channel::<()>();
    let app = router(hub, sink);
    let thread = std::thread::Builder::new()
        .name("scenecast-server".into())
        .spawn(move || {
            runtime.block_on(async move {
                let listener = match tokio::net::TcpListener::from_std(listener) {
                    Ok(l) => l,
                    Err(e) => {
                        tracing::error!(error = %e, "listener setup failed");
                        return;
                    }
                };
                let served = axum::serve(listener, app).with_graceful_shutdown(async move {
                    let _ = stopped.await;
                });
                if let Err(e) = served.await {
                    tracing::error!(error = %e, "server stopped with an error");
                }
            });
            runtime.shutdown_timeout(Duration::from_millis(200));
        })
        .map_err(TransportError::Runtime)?;
    tracing::info!(%addr, "listening");
    Ok(Running {
        addr,
        shutdown: Some(shutdown),
        thread: Some(thread),
    })
}

async fn ws_handler(ws: WebSocketUpgrade, State(state): State<AppState>) -> Response {
    ws.max_message_size(MAX_FRAME_BYTES)
        .max_frame_size(MAX_FRAME_BYTES)
        .on_upgrade(move |socket| run_connection(socket, state))
        .into_response()
}

fn decode_frame(bytes: &[u8]) -> Result<Vec<Wire>, TransportError> {
    schema::decode_batch(bytes)?
        .messages
        .iter()
        .map(|m| Wire::from_message(m).map_err(TransportError::from))
        .collect()
}

async fn send_frame(socket: &mut WebSocket, seq: u64, msgs: &[Arc<Wire>]) -> bool {
    match encode_frame(seq, msgs) {
        Ok(frame) => socket.send(WsMessage::Binary(frame.into())).await.is_ok(),
        Err(e) => {
            tracing::error!(error = %e, "failed to encode batch");
            false
        }
    }
}

async fn run_connection(mut socket: WebSocket, state: AppState) {
    let hello = match tokio::time::timeout(HELLO_TIMEOUT, socket.recv()).await {
        Ok(Some(Ok(WsMessage::Binary(bytes)))) => match decode_frame(&bytes) {
            Ok(mut msgs) if msgs.len() == 1 => msgs.remove(0),
            Ok(_) => {
                tracing::warn!("first frame must hold exactly one message");
                return;
            }
            Err(e) => {
                tracing::warn!(error = %e, "undecodable first frame");
                return;
            }
        },
        _ => {
            tracing::warn!("connection closed before handshake");
            return;
        }
    };

    let accepted = state.hub.lock().handshake(&hello);
    let client_id = match accepted {
        Ok(id) => id,
        Err(reject) => {
            tracing::warn!(message = ?reject, "handshake rejected");
            send_frame(&mut socket, 0, &[Arc::new(reject)]).await;
            let _ = socket.close().await;
            return;
        }
    };
    (state.sink)(HubEvent::Connected(client_id));

    let (mut tx, mut rx) = socket.split();
    let mut tick = tokio::time::interval(FLUSH_INTERVAL);
    tick.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
    loop {
        tokio::select! {
            _ = tick.tick() => {
                let batch = state.hub.lock().take_batch(client_id);
                if let Some((seq, msgs)) = batch {
                    let sent = match encode_frame(seq, &msgs) {
                        Ok(frame) => tx.send(WsMessage::Binary(frame.into())).await.is_ok(),
                        Err(e) => {
                            tracing::error!(client = client_id, error = %e, "failed to encode batch");
                            false
                        }
                    };
                    if !sent {
                        break;
                    }
                }
            }
            incoming = rx.next() => match incoming {
                Some(Ok(WsMessage::Binary(bytes))) => {
                    let msgs = match decode_frame(&bytes) {
                        Ok(msgs) => msgs,
                        Err(e) => {
                            tracing::warn!(client = client_id, error = %e, "closing after malformed frame");
                            break;
                        }
                    };
                    let events: Vec<HubEvent> = {
                        let mut hub = state.hub.lock();
                        msgs.into_iter()
                            .filter_map(|w| hub.handle_client_message(client_id, w))
                            .collect()
                    };
                    for e in events {
                        (state.sink)(e);
                    }
                }
                Some(Ok(WsMessage::Close(_))) | None | Some(Err(_)) => break,
                Some(Ok(_)) => {}
            }
        }
    }
    state.hub.lock().disconnect(client_id);
    (state.sink)(HubEvent::Disconnected(client_id));
}
