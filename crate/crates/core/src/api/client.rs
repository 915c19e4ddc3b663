use std::sync::Arc;

use crate::protocol::CameraState;

use super::{Core, GuiApi, Result, SceneApi, Scope};

/// One connected client: its camera and its private scene and GUI.
#[derive(Clone)]
pub struct ClientHandle {
    core: Arc<Core>,
    client_id: u64,
}

impl std::fmt::Debug for ClientHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClientHandle")
            .field("client_id", &self.client_id)
            .finish()
    }
}

impl ClientHandle {
    pub(crate) fn new(core: Arc<Core>, client_id: u64) -> Self {
        Self { core, client_id }
    }

    pub fn id(&self) -> u64 {
        self.client_id
    }

    pub fn is_connected(&self) -> bool {
        self.core.hub.lock().client(self.client_id).is_some()
    }

    /// The latest camera the client reported, or the last one set from
    /// here, whichever came later. `None` before either happens.
    pub fn camera(&self) -> Result<Option<CameraState>> {
        Ok(self.core.hub.lock().camera(self.client_id)?)
    }

    /// Moves this client's camera.
    pub fn set_camera(&self, camera: CameraState) -> Result<()> {
        Ok(self.core.hub.lock().set_camera(self.client_id, camera)?)
    }

    /// Scene objects only this client sees.
    pub fn scene(&self) -> SceneApi {
        SceneApi::new(self.core.clone(), Scope::Client(self.client_id))
    }

    /// GUI elements only this client sees.
    pub fn gui(&self) -> GuiApi {
        GuiApi::new(self.core.clone(), Scope::Client(self.client_id))
    }
}
