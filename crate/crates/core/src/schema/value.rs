//! Dynamic field values carried in message payloads and property maps.

use std::collections::BTreeMap;
use std::fmt;

/// A single field value.
///
/// Enum-of-strings fields travel as [`Value::String`]. [`Value::Nil`] only
/// appears nested inside composite values; a top-level optional field that
/// is unset is simply absent from the payload.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Nil,
    Bool(bool),
    Int(i64),
    Float(f64),
    String(String),
    Bytes(Vec<u8>),
    Float32Array(Vec<f32>),
    Tuple(Vec<Value>),
    List(Vec<Value>),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Nil => "nil",
            Value::Bool(_) => "bool",
            Value::Int(_) => "int",
            Value::Float(_) => "float",
            Value::String(_) => "string",
            Value::Bytes(_) => "bytes",
            Value::Float32Array(_) => "float32_array",
            Value::Tuple(_) => "tuple",
            Value::List(_) => "list",
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Numeric view; integers widen to float.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(f) => Some(*f),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bytes(&self) -> Option<&[u8]> {
        match self {
            Value::Bytes(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_f32_slice(&self) -> Option<&[f32]> {
        match self {
            Value::Float32Array(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Value]> {
        match self {
            Value::Tuple(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    /// Reads a tuple of N numbers.
    pub fn as_f64_array<const N: usize>(&self) -> Option<[f64; N]> {
        let items = self.as_tuple()?;
        if items.len() != N {
            return None;
        }
        let mut out = [0.0; N];
        for (slot, item) in out.iter_mut().zip(items) {
            *slot = item.as_f64()?;
        }
        Some(out)
    }

    /// Reads a tuple of three integers in `0..=255`.
    pub fn as_rgb(&self) -> Option<[u8; 3]> {
        let items = self.as_tuple()?;
        if items.len() != 3 {
            return None;
        }
        let mut out = [0u8; 3];
        for (slot, item) in out.iter_mut().zip(items) {
            *slot = u8::try_from(item.as_i64()?).ok()?;
        }
        Some(out)
    }

    pub fn vec3(v: [f64; 3]) -> Value {
        Value::Tuple(v.iter().map(|x| Value::Float(*x)).collect())
    }

    pub fn vec2(v: [f64; 2]) -> Value {
        Value::Tuple(v.iter().map(|x| Value::Float(*x)).collect())
    }

    pub fn quat(v: [f64; 4]) -> Value {
        Value::Tuple(v.iter().map(|x| Value::Float(*x)).collect())
    }

    pub fn rgb(v: [u8; 3]) -> Value {
        Value::Tuple(v.iter().map(|x| Value::Int(i64::from(*x))).collect())
    }

    pub fn strings<S: AsRef<str>>(items: &[S]) -> Value {
        Value::List(
            items
                .iter()
                .map(|s| Value::String(s.as_ref().to_owned()))
                .collect(),
        )
    }

    /// True when every float reachable from this value is finite.
    pub fn is_finite(&self) -> bool {
        match self {
            Value::Float(f) => f.is_finite(),
            Value::Float32Array(v) => v.iter().all(|f| f.is_finite()),
            Value::Tuple(items) | Value::List(items) => items.iter().all(Value::is_finite),
            _ => true,
        }
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(i64::from(v))
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::String(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::String(v)
    }
}

impl From<Vec<u8>> for Value {
    fn from(v: Vec<u8>) -> Self {
        Value::Bytes(v)
    }
}

impl From<Vec<f32>> for Value {
    fn from(v: Vec<f32>) -> Self {
        Value::Float32Array(v)
    }
}

impl From<[u8; 3]> for Value {
    fn from(v: [u8; 3]) -> Self {
        Value::rgb(v)
    }
}

impl From<(u8, u8, u8)> for Value {
    fn from(v: (u8, u8, u8)) -> Self {
        Value::rgb([v.0, v.1, v.2])
    }
}

impl From<[f64; 3]> for Value {
    fn from(v: [f64; 3]) -> Self {
        Value::vec3(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nil => write!(f, "nil"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x}"),
            Value::String(s) => write!(f, "{s:?}"),
            Value::Bytes(b) => write!(f, "<{} bytes>", b.len()),
            Value::Float32Array(v) => write!(f, "<{} f32>", v.len()),
            Value::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
            Value::List(items) => {
                write!(f, "[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Named property values, ordered by name.
pub type Props = BTreeMap<String, Value>;
