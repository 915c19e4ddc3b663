//! The imperative, handle-based server API.
//!
//! ```no_run
//! use scenecast::api::{BoxParams, Server};
//!
//! let server = Server::start("127.0.0.1", 8080)?;
//! let cube = server.scene().add_box("/box", BoxParams::default())?;
//! cube.set_color([255, 0, 0])?;
//! cube.on_click(|_| println!("Box clicked"))?;
//! # Ok::<(), scenecast::api::ApiError>(())
//! ```
//!
//! Writes update server state immediately and are queued for clients; they
//! never wait on the network. Callbacks run in registration order on one
//! dispatcher thread.

mod client;
mod gui;
mod params;
mod scene;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, Weak};
use std::thread::{JoinHandle, ThreadId};

use parking_lot::Mutex;
use thiserror::Error;

pub use client::ClientHandle;
pub use gui::{GuiApi, GuiHandle};
pub use params::{
    BoxParams, CameraFrustumParams, FrameParams, GridParams, IcosphereParams, ImageParams, LabelParams,
    LineSegmentsParams, MeshParams, NodeParams, PointCloudParams,
};
pub use scene::{NodeHandle, SceneApi};

pub use crate::gui::GuiEvent;
pub use crate::protocol::CameraState;
pub use crate::transport::{ClickEvent, Scope};

use crate::gui::{GuiError, ListenerId};
use crate::scene::{PathError, PoseError, SceneError, ScenePath};
use crate::transport::server::{self as net, Running};
use crate::transport::{Hub, HubEvent, TransportError};

#[derive(Debug, Error)]
pub enum ApiError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Gui(#[from] GuiError),
    #[error("{0} has been removed")]
    UseAfterRemove(String),
    #[error("client {0} is no longer connected")]
    Disconnected(u64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Transport(TransportError),
}

impl From<TransportError> for ApiError {
    fn from(e: TransportError) -> Self {
        match e {
            TransportError::Scene(e) => ApiError::Scene(e),
            TransportError::Gui(e) => ApiError::Gui(e),
            TransportError::UnknownClient(id) => ApiError::Disconnected(id),
            TransportError::InvalidCamera(reason) => ApiError::InvalidArgument(reason),
            other => ApiError::Transport(other),
        }
    }
}

impl From<PathError> for ApiError {
    fn from(e: PathError) -> Self {
        ApiError::Scene(e.into())
    }
}

impl From<PoseError> for ApiError {
    fn from(e: PoseError) -> Self {
        ApiError::Scene(e.into())
    }
}

pub type Result<T, E = ApiError> = std::result::Result<T, E>;

type GuiCallback = Arc<dyn Fn(&GuiEvent) + Send + Sync>;
type ClickCallback = Arc<dyn Fn(&ClickEvent) + Send + Sync>;
type ConnectCallback = Arc<dyn Fn(&ClientHandle) + Send + Sync>;
type DisconnectCallback = Arc<dyn Fn(u64) + Send + Sync>;

struct ClickSub {
    id: u64,
    scope: Scope,
    path: ScenePath,
    callback: ClickCallback,
}

#[derive(Default)]
struct Callbacks {
    gui: HashMap<(Scope, ListenerId), GuiCallback>,
    click: Vec<ClickSub>,
    connect: Vec<(u64, ConnectCallback)>,
    disconnect: Vec<(u64, DisconnectCallback)>,
}

pub(crate) struct Core {
    hub: Arc<Mutex<Hub>>,
    callbacks: Mutex<Callbacks>,
    next_sub: AtomicU64,
}

impl Core {
    fn next_sub(&self) -> u64 {
        self.next_sub.fetch_add(1, Ordering::Relaxed)
    }

    fn subscription(self: &Arc<Self>, target: SubTarget) -> Subscription {
        Subscription {
            core: Arc::downgrade(self),
            target,
        }
    }

    fn dispatch(self: &Arc<Self>, event: HubEvent) {
        match event {
            HubEvent::Connected(id) => {
                let callbacks: Vec<_> = self.callbacks.lock().connect.iter().map(|(_, c)| c.clone()).collect();
                let handle = ClientHandle::new(self.clone(), id);
                for cb in callbacks {
                    guarded("client connect", || cb(&handle));
                }
            }
            HubEvent::Disconnected(id) => {
                let callbacks: Vec<_> = {
                    let mut cbs = self.callbacks.lock();
                    cbs.gui.retain(|(scope, _), _| *scope != Scope::Client(id));
                    cbs.click.retain(|s| s.scope != Scope::Client(id));
                    cbs.disconnect.iter().map(|(_, c)| c.clone()).collect()
                };
                for cb in callbacks {
                    guarded("client disconnect", || cb(id));
                }
            }
            HubEvent::Gui {
                scope,
                event,
                listeners,
            } => {
                let callbacks: Vec<_> = {
                    let cbs = self.callbacks.lock();
                    listeners
                        .iter()
                        .filter_map(|l| cbs.gui.get(&(scope, *l)).cloned())
                        .collect()
                };
                for cb in callbacks {
                    guarded("gui update", || cb(&event));
                }
            }
            HubEvent::Click { scope, event } => {
                let callbacks: Vec<_> = self
                    .callbacks
                    .lock()
                    .click
                    .iter()
                    .filter(|s| s.scope == scope && s.path == event.path)
                    .map(|s| s.callback.clone())
                    .collect();
                for cb in callbacks {
                    guarded("click", || cb(&event));
                }
            }
        }
    }
}

fn guarded(what: &str, f: impl FnOnce()) {
    if catch_unwind(AssertUnwindSafe(f)).is_err() {
        tracing::error!(callback = what, "callback panicked; continuing");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SubTarget {
    Gui(Scope, ListenerId),
    Click(u64),
    Connect(u64),
    Disconnect(u64),
}

/// A registered callback. Callbacks stay registered until
/// [`Subscription::unsubscribe`] is called, even if this value is dropped.
#[derive(Debug, Clone)]
pub struct Subscription {
    core: Weak<Core>,
    target: SubTarget,
}

impl Subscription {
    pub fn unsubscribe(self) {
        let Some(core) = self.core.upgrade() else {
            return;
        };
        let mut cbs = core.callbacks.lock();
        match self.target {
            SubTarget::Gui(scope, id) => {
                cbs.gui.remove(&(scope, id));
                drop(cbs);
                core.hub.lock().unsubscribe(scope, id);
            }
            SubTarget::Click(id) => cbs.click.retain(|s| s.id != id),
            SubTarget::Connect(id) => cbs.connect.retain(|(i, _)| *i != id),
            SubTarget::Disconnect(id) => cbs.disconnect.retain(|(i, _)| *i != id),
        }
    }
}

/// A running visualization server.
pub struct Server {
    core: Arc<Core>,
    running: Running,
    dispatcher: Option<JoinHandle<()>>,
    dispatcher_id: ThreadId,
}

impl Server {
    /// Binds `host:port` and starts serving. Port 0 picks a free port.
    pub fn start(host: &str, port: u16) -> Result<Server> {
        let hub = Arc::new(Mutex::new(Hub::default()));
        let core = Arc::new(Core {
            hub: hub.clone(),
            callbacks: Mutex::new(Callbacks::default()),
            next_sub: AtomicU64::new(1),
        });
        let (tx, rx) = mpsc::channel::<HubEvent>();
        let sink: net::EventSink = Arc::new(move |e| {
            let _ = tx.send(e);
        });
        let running = net::serve(host, port, hub, sink)?;

        let dispatch_core = core.clone();
        let dispatcher = std::thread::Builder::new()
            .name("scenecast-dispatch".into())
            .spawn(move || {
                for event in rx {
                    dispatch_core.dispatch(event);
                }
            })
            .map_err(|e| ApiError::Transport(TransportError::Runtime(e)))?;
        let dispatcher_id = dispatcher.thread().id();
        Ok(Server {
            core,
            running,
            dispatcher: Some(dispatcher),
            dispatcher_id,
        })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.running.local_addr()
    }

    /// WebSocket URL clients connect to.
    pub fn ws_url(&self) -> String {
        format!("ws://{}/ws", self.local_addr())
    }

    pub fn http_url(&self) -> String {
        format!("http://{}", self.local_addr())
    }

    /// Scene shared by every client.
    pub fn scene(&self) -> SceneApi {
        SceneApi::new(self.core.clone(), Scope::Broadcast)
    }

    /// GUI shared by every client.
    pub fn gui(&self) -> GuiApi {
        GuiApi::new(self.core.clone(), Scope::Broadcast)
    }

    /// Runs `callback` for each newly accepted client, after its snapshot
    /// has been queued.
    pub fn on_client_connect(&self, callback: impl Fn(&ClientHandle) + Send + Sync + 'static) -> Subscription {
        let id = self.core.next_sub();
        self.core.callbacks.lock().connect.push((id, Arc::new(callback)));
        self.core.subscription(SubTarget::Connect(id))
    }

    pub fn on_client_disconnect(&self, callback: impl Fn(u64) + Send + Sync + 'static) -> Subscription {
        let id = self.core.next_sub();
        self.core.callbacks.lock().disconnect.push((id, Arc::new(callback)));
        self.core.subscription(SubTarget::Disconnect(id))
    }

    /// Currently connected clients, by id.
    pub fn list_clients(&self) -> Vec<ClientHandle> {
        let ids = self.core.hub.lock().client_ids();
        ids.into_iter()
            .map(|id| ClientHandle::new(self.core.clone(), id))
            .collect()
    }

    pub fn client(&self, client_id: u64) -> Option<ClientHandle> {
        let connected = self.core.hub.lock().client(client_id).is_some();
        connected.then(|| ClientHandle::new(self.core.clone(), client_id))
    }

    /// Read-only access to the synchronization state.
    pub fn inspect<R>(&self, f: impl FnOnce(&Hub) -> R) -> R {
        f(&self.core.hub.lock())
    }

    /// Stops serving, closes connections and drops all callbacks.
    pub fn stop(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        self.running.stop();
        if let Some(d) = self.dispatcher.take() {
            if std::thread::current().id() != self.dispatcher_id {
                let _ = d.join();
            }
        }
        *self.core.callbacks.lock() = Callbacks::default();
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        self.shutdown();
    }
}
