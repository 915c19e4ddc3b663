use std::fmt;
use std::str::FromStr;

use crate::props::{self, PropCheck, PropSpec};
use crate::schema::{FieldType, Props, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GuiKind {
    Button,
    Checkbox,
    Slider,
    Number,
    Text,
    Dropdown,
    Rgb,
    Vector3,
    Folder,
    TabGroup,
    Tab,
    Markdown,
}

impl GuiKind {
    pub const ALL: [GuiKind; 12] = [
        GuiKind::Button,
        GuiKind::Checkbox,
        GuiKind::Slider,
        GuiKind::Number,
        GuiKind::Text,
        GuiKind::Dropdown,
        GuiKind::Rgb,
        GuiKind::Vector3,
        GuiKind::Folder,
        GuiKind::TabGroup,
        GuiKind::Tab,
        GuiKind::Markdown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GuiKind::Button => "button",
            GuiKind::Checkbox => "checkbox",
            GuiKind::Slider => "slider",
            GuiKind::Number => "number",
            GuiKind::Text => "text",
            GuiKind::Dropdown => "dropdown",
            GuiKind::Rgb => "rgb",
            GuiKind::Vector3 => "vector3",
            GuiKind::Folder => "folder",
            GuiKind::TabGroup => "tab_group",
            GuiKind::Tab => "tab",
            GuiKind::Markdown => "markdown",
        }
    }

    pub fn type_stem(self) -> &'static str {
        match self {
            GuiKind::Button => "Button",
            GuiKind::Checkbox => "Checkbox",
            GuiKind::Slider => "Slider",
            GuiKind::Number => "Number",
            GuiKind::Text => "Text",
            GuiKind::Dropdown => "Dropdown",
            GuiKind::Rgb => "Rgb",
            GuiKind::Vector3 => "Vector3",
            GuiKind::Folder => "Folder",
            GuiKind::TabGroup => "TabGroup",
            GuiKind::Tab => "Tab",
            GuiKind::Markdown => "Markdown",
        }
    }

    pub fn is_container(self) -> bool {
        matches!(self, GuiKind::Folder | GuiKind::TabGroup | GuiKind::Tab)
    }

    /// Type of the element's value, or `None` for kinds without one.
    pub fn value_type(self) -> Option<FieldType> {
        match self {
            GuiKind::Button => Some(FieldType::Int),
            GuiKind::Checkbox => Some(FieldType::Bool),
            GuiKind::Slider | GuiKind::Number => Some(FieldType::Float),
            GuiKind::Text | GuiKind::Dropdown => Some(FieldType::String),
            GuiKind::Rgb => Some(FieldType::rgb()),
            GuiKind::Vector3 => Some(FieldType::vec3()),
            GuiKind::Folder | GuiKind::TabGroup | GuiKind::Tab | GuiKind::Markdown => None,
        }
    }

    pub fn prop_specs(self) -> Vec<PropSpec> {
        use FieldType as F;
        let mut specs = vec![
            PropSpec::new("label", F::String),
            PropSpec::new("disabled", F::Bool),
            PropSpec::new("visible", F::Bool),
        ];
        let step = || PropSpec::new("step", F::Float).check(PropCheck::Positive);
        match self {
            GuiKind::Button => {
                specs.push(PropSpec::new("color", F::rgb()).check(PropCheck::Rgb).optional());
            }
            GuiKind::Slider => {
                specs.push(PropSpec::new("min", F::Float));
                specs.push(PropSpec::new("max", F::Float));
                specs.push(step());
            }
            GuiKind::Number => {
                specs.push(PropSpec::new("min", F::Float).optional());
                specs.push(PropSpec::new("max", F::Float).optional());
                specs.push(step());
            }
            GuiKind::Dropdown => {
                specs.push(PropSpec::new("options", F::list(F::String)).check(PropCheck::NonEmpty));
            }
            GuiKind::Vector3 => specs.push(step()),
            GuiKind::Folder => specs.push(PropSpec::new("expanded", F::Bool)),
            GuiKind::Markdown => specs.push(PropSpec::new("content", F::String)),
            GuiKind::Checkbox | GuiKind::Text | GuiKind::Rgb | GuiKind::TabGroup | GuiKind::Tab => {}
        }
        specs
    }

    pub fn validate_props(self, props: &Props) -> Result<(), String> {
        let specs = self.prop_specs();
        for name in props.keys() {
            if props::find(&specs, name).is_none() {
                return Err(format!("{} has no property {name:?}", self.as_str()));
            }
        }
        for spec in &specs {
            match props.get(spec.name) {
                Some(v) => spec.validate(v)?,
                None if spec.optional => {}
                None => return Err(format!("{} is missing property {:?}", self.as_str(), spec.name)),
            }
        }
        if let (Some(lo), Some(hi)) = bounds(props) {
            if lo > hi {
                return Err(format!("min {lo} exceeds max {hi}"));
            }
        }
        Ok(())
    }

    /// Strict check of a value against the element's current props.
    pub fn validate_value(self, props: &Props, value: Option<&Value>) -> Result<(), String> {
        let Some(ty) = self.value_type() else {
            return match value {
                None => Ok(()),
                Some(_) => Err(format!("{} elements carry no value", self.as_str())),
            };
        };
        let value = value.ok_or_else(|| format!("{} requires a value", self.as_str()))?;
        if !ty.accepts(value) || !value.is_finite() {
            return Err(format!("{} value must be {ty}, got {value}", self.as_str()));
        }
        match self {
            GuiKind::Button if value.as_i64().is_some_and(|c| c < 0) => {
                Err("click count cannot be negative".into())
            }
            GuiKind::Slider | GuiKind::Number => {
                let x = value.as_f64().unwrap_or_default();
                let (lo, hi) = bounds(props);
                if lo.is_some_and(|lo| x < lo) || hi.is_some_and(|hi| x > hi) {
                    Err(format!("{x} outside [{}, {}]", fmt_bound(lo), fmt_bound(hi)))
                } else {
                    Ok(())
                }
            }
            GuiKind::Rgb if value.as_rgb().is_none() => Err(format!("{value} is not an rgb triple")),
            GuiKind::Dropdown => {
                let s = value.as_str().unwrap_or_default();
                if options(props).any(|o| o == s) {
                    Ok(())
                } else {
                    Err(format!("{s:?} is not a dropdown option"))
                }
            }
            _ => Ok(()),
        }
    }

    /// Coerces a client-sent value: numeric drift clamps into range, type
    /// and enum violations are errors.
    pub fn coerce_client_value(self, props: &Props, value: &Value) -> Result<Value, String> {
        let ill = || format!("{} cannot take {}", self.as_str(), value);
        let finite = |x: f64| if x.is_finite() { Ok(x) } else { Err(ill()) };
        match self {
            GuiKind::Slider | GuiKind::Number => {
                let x = finite(value.as_f64().ok_or_else(ill)?)?;
                Ok(Value::Float(clamp(x, bounds(props))))
            }
            GuiKind::Checkbox => value.as_bool().map(Value::Bool).ok_or_else(ill),
            GuiKind::Text => value.as_str().map(Value::from).ok_or_else(ill),
            GuiKind::Dropdown => {
                let s = value.as_str().ok_or_else(ill)?;
                if options(props).any(|o| o == s) {
                    Ok(Value::from(s))
                } else {
                    Err(format!("{s:?} is not a dropdown option"))
                }
            }
            GuiKind::Rgb => {
                let items = value.as_tuple().filter(|t| t.len() == 3).ok_or_else(ill)?;
                let mut out = [0u8; 3];
                for (slot, item) in out.iter_mut().zip(items) {
                    *slot = item.as_i64().ok_or_else(ill)?.clamp(0, 255) as u8;
                }
                Ok(Value::rgb(out))
            }
            GuiKind::Vector3 => {
                let v = value.as_f64_array::<3>().ok_or_else(ill)?;
                for x in v {
                    finite(x)?;
                }
                Ok(Value::vec3(v))
            }
            GuiKind::Button
            | GuiKind::Folder
            | GuiKind::TabGroup
            | GuiKind::Tab
            | GuiKind::Markdown => Err(ill()),
        }
    }

    /// Brings a value back inside props that were just changed.
    pub fn fit_value(self, props: &Props, value: Value) -> Value {
        match self {
            GuiKind::Slider | GuiKind::Number => match value.as_f64() {
                Some(x) => Value::Float(clamp(x, bounds(props))),
                None => value,
            },
            GuiKind::Dropdown => {
                let s = value.as_str().unwrap_or_default();
                if options(props).any(|o| o == s) {
                    value
                } else {
                    options(props).next().map(Value::from).unwrap_or(value)
                }
            }
            _ => value,
        }
    }
}

fn bounds(props: &Props) -> (Option<f64>, Option<f64>) {
    (
        props.get("min").and_then(Value::as_f64),
        props.get("max").and_then(Value::as_f64),
    )
}

fn clamp(x: f64, (lo, hi): (Option<f64>, Option<f64>)) -> f64 {
    let x = lo.map_or(x, |lo| x.max(lo));
    hi.map_or(x, |hi| x.min(hi))
}

fn fmt_bound(b: Option<f64>) -> String {
    b.map_or_else(|| "unbounded".into(), |x| x.to_string())
}

fn options(props: &Props) -> impl Iterator<Item = &str> {
    props
        .get("options")
        .and_then(Value::as_list)
        .unwrap_or(&[])
        .iter()
        .filter_map(Value::as_str)
}

impl fmt::Display for GuiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GuiKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GuiKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown gui kind {s:?}"))
    }
}
