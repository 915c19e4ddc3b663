use std::sync::Arc;

use crate::gui::{base_props, GuiElement, GuiEvent, GuiKind, Uid, ROOT_CONTAINER};
use crate::schema::{Props, Value};
use crate::transport::{Hub, TransportError};

use super::{ApiError, Core, Result, Scope, SubTarget, Subscription};

/// Adds GUI elements to the root panel or to a container.
#[derive(Clone)]
pub struct GuiApi {
    core: Arc<Core>,
    scope: Scope,
    container: Uid,
}

impl GuiApi {
    pub(crate) fn new(core: Arc<Core>, scope: Scope) -> Self {
        Self {
            core,
            scope,
            container: ROOT_CONTAINER,
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    /// Adds an element with explicit props and initial value.
    pub fn add(&self, kind: GuiKind, props: Props, value: Option<Value>) -> Result<GuiHandle> {
        let uid = self
            .core
            .hub
            .lock()
            .add_gui(self.scope, kind, props, value, self.container)?;
        Ok(GuiHandle {
            core: self.core.clone(),
            scope: self.scope,
            uid,
        })
    }

    fn add_with(
        &self,
        kind: GuiKind,
        label: &str,
        extra: impl IntoIterator<Item = (&'static str, Value)>,
        value: Option<Value>,
    ) -> Result<GuiHandle> {
        let mut props = base_props(label);
        props.extend(extra.into_iter().map(|(k, v)| (k.to_owned(), v)));
        self.add(kind, props, value)
    }

    /// A button; its value counts clicks.
    pub fn add_button(&self, label: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::Button, label, [], Some(Value::Int(0)))
    }

    pub fn add_checkbox(&self, label: &str, initial: bool) -> Result<GuiHandle> {
        self.add_with(GuiKind::Checkbox, label, [], Some(initial.into()))
    }

    pub fn add_slider(&self, label: &str, min: f64, max: f64, step: f64, initial: f64) -> Result<GuiHandle> {
        self.add_with(
            GuiKind::Slider,
            label,
            [("min", min.into()), ("max", max.into()), ("step", step.into())],
            Some(initial.into()),
        )
    }

    pub fn add_number(&self, label: &str, initial: f64, step: f64) -> Result<GuiHandle> {
        self.add_with(GuiKind::Number, label, [("step", step.into())], Some(initial.into()))
    }

    pub fn add_text(&self, label: &str, initial: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::Text, label, [], Some(initial.into()))
    }

    /// A dropdown starting at `initial`, or at the first option.
    pub fn add_dropdown<S: AsRef<str>>(&self, label: &str, options: &[S], initial: Option<&str>) -> Result<GuiHandle> {
        let first = options.first().map(|s| s.as_ref().to_owned());
        let initial = initial.map(str::to_owned).or(first).unwrap_or_default();
        self.add_with(
            GuiKind::Dropdown,
            label,
            [("options", Value::strings(options))],
            Some(initial.into()),
        )
    }

    pub fn add_rgb(&self, label: &str, initial: [u8; 3]) -> Result<GuiHandle> {
        self.add_with(GuiKind::Rgb, label, [], Some(initial.into()))
    }

    pub fn add_vector3(&self, label: &str, initial: [f64; 3], step: f64) -> Result<GuiHandle> {
        self.add_with(GuiKind::Vector3, label, [("step", step.into())], Some(initial.into()))
    }

    pub fn add_folder(&self, label: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::Folder, label, [("expanded", true.into())], None)
    }

    pub fn add_tab_group(&self, label: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::TabGroup, label, [], None)
    }

    /// A tab; only valid inside a tab group's [`GuiHandle::contents`].
    pub fn add_tab(&self, label: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::Tab, label, [], None)
    }

    pub fn add_markdown(&self, content: &str) -> Result<GuiHandle> {
        self.add_with(GuiKind::Markdown, "", [("content", content.into())], None)
    }

    /// Handle to an existing element in this scope.
    pub fn get(&self, uid: Uid) -> Result<Option<GuiHandle>> {
        let exists = self.core.hub.lock().gui(self.scope)?.contains(uid);
        Ok(exists.then(|| GuiHandle {
            core: self.core.clone(),
            scope: self.scope,
            uid,
        }))
    }
}

/// A uid-addressed reference to one GUI element.
///
/// `value()` reflects the latest validated client update or server write.
#[derive(Clone)]
pub struct GuiHandle {
    core: Arc<Core>,
    scope: Scope,
    uid: Uid,
}

impl std::fmt::Debug for GuiHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GuiHandle")
            .field("scope", &self.scope)
            .field("uid", &self.uid)
            .finish()
    }
}

impl GuiHandle {
    pub fn uid(&self) -> Uid {
        self.uid
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    fn gone(&self) -> ApiError {
        ApiError::UseAfterRemove(format!("gui element {}", self.uid))
    }

    fn read<R>(&self, f: impl FnOnce(&GuiElement) -> R) -> Result<R> {
        let hub = self.core.hub.lock();
        hub.gui(self.scope)?.get(self.uid).map(f).ok_or_else(|| self.gone())
    }

    fn write(&self, f: impl FnOnce(&mut Hub) -> Result<(), TransportError>) -> Result<()> {
        let mut hub = self.core.hub.lock();
        if !hub.gui(self.scope)?.contains(self.uid) {
            return Err(self.gone());
        }
        Ok(f(&mut hub)?)
    }

    pub fn is_live(&self) -> bool {
        self.read(|_| ()).is_ok()
    }

    pub fn element(&self) -> Result<GuiElement> {
        self.read(GuiElement::clone)
    }

    pub fn kind(&self) -> Result<GuiKind> {
        self.read(|e| e.kind)
    }

    pub fn prop(&self, name: &str) -> Result<Option<Value>> {
        self.read(|e| e.prop(name).cloned())
    }

    /// The current value; `None` for kinds without one.
    pub fn value(&self) -> Result<Option<Value>> {
        self.read(|e| e.value.clone())
    }

    pub fn value_f64(&self) -> Result<f64> {
        self.typed_value("a number", Value::as_f64)
    }

    pub fn value_i64(&self) -> Result<i64> {
        self.typed_value("an integer", Value::as_i64)
    }

    pub fn value_bool(&self) -> Result<bool> {
        self.typed_value("a boolean", Value::as_bool)
    }

    pub fn value_string(&self) -> Result<String> {
        self.typed_value("a string", |v| v.as_str().map(str::to_owned))
    }

    fn typed_value<T>(&self, what: &str, f: impl FnOnce(&Value) -> Option<T>) -> Result<T> {
        self.value()?
            .as_ref()
            .and_then(f)
            .ok_or_else(|| ApiError::InvalidArgument(format!("gui element {} has no value that is {what}", self.uid)))
    }

    /// Server-side write; never triggers update callbacks.
    pub fn set_value(&self, value: impl Into<Value>) -> Result<()> {
        let value = value.into();
        self.write(|hub| hub.set_gui_value(self.scope, self.uid, value))
    }

    pub fn set_prop(&self, name: &str, value: impl Into<Value>) -> Result<()> {
        let value = value.into();
        self.write(|hub| hub.set_gui_prop(self.scope, self.uid, name, value))
    }

    pub fn set_label(&self, label: &str) -> Result<()> {
        self.set_prop("label", label)
    }

    pub fn set_disabled(&self, disabled: bool) -> Result<()> {
        self.set_prop("disabled", disabled)
    }

    pub fn set_visible(&self, visible: bool) -> Result<()> {
        self.set_prop("visible", visible)
    }

    pub fn set_color(&self, rgb: [u8; 3]) -> Result<()> {
        self.set_prop("color", rgb)
    }

    /// Adds elements inside this container.
    pub fn contents(&self) -> Result<GuiApi> {
        if !self.kind()?.is_container() {
            return Err(ApiError::InvalidArgument(format!(
                "gui element {} is not a container",
                self.uid
            )));
        }
        Ok(GuiApi {
            core: self.core.clone(),
            scope: self.scope,
            container: self.uid,
        })
    }

    /// Runs `callback` after each validated client change, including
    /// button clicks. Server writes never trigger it.
    pub fn on_update(&self, callback: impl Fn(&GuiEvent) + Send + Sync + 'static) -> Result<Subscription> {
        let mut cbs = self.core.callbacks.lock();
        let id = self.core.hub.lock().subscribe(self.scope, self.uid).map_err(|e| match e {
            TransportError::Gui(crate::gui::GuiError::UnknownUid(_)) => self.gone(),
            other => other.into(),
        })?;
        cbs.gui.insert((self.scope, id), Arc::new(callback));
        drop(cbs);
        Ok(self.core.subscription(SubTarget::Gui(self.scope, id)))
    }

    /// Alias of [`GuiHandle::on_update`] that reads better for buttons.
    pub fn on_click(&self, callback: impl Fn(&GuiEvent) + Send + Sync + 'static) -> Result<Subscription> {
        self.on_update(callback)
    }

    /// Removes the element and anything inside it.
    pub fn remove(&self) -> Result<()> {
        self.write(|hub| hub.remove_gui(self.scope, self.uid).map(|_| ()))
    }
}
