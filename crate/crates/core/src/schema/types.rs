//! Field types, message types and the message registry.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unregistered message type {0:?}")]
    Unregistered(String),
    #[error("duplicate message type {0:?}")]
    DuplicateType(String),
    #[error("{type_name}: missing required field {field:?}")]
    MissingField { type_name: String, field: String },
    #[error("{type_name}: unexpected field {field:?}")]
    UnexpectedField { type_name: String, field: String },
    #[error("{type_name}.{field}: expected {expected}, got {got}")]
    FieldMismatch {
        type_name: String,
        field: String,
        expected: String,
        got: String,
    },
    #[error("cannot parse field type {0:?}")]
    BadFieldType(String),
}

/// The closed set of wire field types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldType {
    Bool,
    Int,
    Float,
    String,
    Bytes,
    /// Little-endian `f32` values, carried on the wire as a byte string.
    Float32Array,
    Tuple(Vec<FieldType>),
    Optional(Box<FieldType>),
    List(Box<FieldType>),
    Enum(Vec<String>),
}

impl FieldType {
    pub fn vec2() -> Self {
        FieldType::Tuple(vec![FieldType::Float; 2])
    }

    pub fn vec3() -> Self {
        FieldType::Tuple(vec![FieldType::Float; 3])
    }

    pub fn quat() -> Self {
        FieldType::Tuple(vec![FieldType::Float; 4])
    }

    pub fn rgb() -> Self {
        FieldType::Tuple(vec![FieldType::Int; 3])
    }

    pub fn optional(inner: FieldType) -> Self {
        FieldType::Optional(Box::new(inner))
    }

    pub fn list(inner: FieldType) -> Self {
        FieldType::List(Box::new(inner))
    }

    pub fn enumeration(options: &[&str]) -> Self {
        FieldType::Enum(options.iter().map(|s| (*s).to_owned()).collect())
    }

    pub fn is_optional(&self) -> bool {
        matches!(self, FieldType::Optional(_))
    }

    /// Structural check of a value against this type. Returns false on any
    /// mismatch, including unknown enum members.
    pub fn accepts(&self, value: &Value) -> bool {
        match (self, value) {
            (FieldType::Bool, Value::Bool(_))
            | (FieldType::Int, Value::Int(_))
            | (FieldType::Float, Value::Float(_))
            | (FieldType::String, Value::String(_))
            | (FieldType::Bytes, Value::Bytes(_))
            | (FieldType::Float32Array, Value::Float32Array(_)) => true,
            (FieldType::Enum(options), Value::String(s)) => options.iter().any(|o| o == s),
            (FieldType::Tuple(types), Value::Tuple(items)) => {
                types.len() == items.len() && types.iter().zip(items).all(|(t, v)| t.accepts(v))
            }
            (FieldType::List(inner), Value::List(items)) => items.iter().all(|v| inner.accepts(v)),
            (FieldType::Optional(_), Value::Nil) => true,
            (FieldType::Optional(inner), v) => inner.accepts(v),
            _ => false,
        }
    }
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldType::Bool => write!(f, "bool"),
            FieldType::Int => write!(f, "int"),
            FieldType::Float => write!(f, "float"),
            FieldType::String => write!(f, "string"),
            FieldType::Bytes => write!(f, "bytes"),
            FieldType::Float32Array => write!(f, "float32_array"),
            FieldType::Tuple(items) => {
                write!(f, "tuple<")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ">")
            }
            FieldType::Optional(inner) => write!(f, "optional<{inner}>"),
            FieldType::List(inner) => write!(f, "list<{inner}>"),
            FieldType::Enum(options) => write!(f, "enum<{}>", options.join("|")),
        }
    }
}

impl FromStr for FieldType {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SchemaError::BadFieldType(s.to_owned());
        let s = s.trim();
        match s {
            "bool" => return Ok(FieldType::Bool),
            "int" => return Ok(FieldType::Int),
            "float" => return Ok(FieldType::Float),
            "string" => return Ok(FieldType::String),
            "bytes" => return Ok(FieldType::Bytes),
            "float32_array" => return Ok(FieldType::Float32Array),
            _ => {}
        }
        let (head, rest) = s.split_once('<').ok_or_else(bad)?;
        let inner = rest.strip_suffix('>').ok_or_else(bad)?;
        match head {
            "optional" => Ok(FieldType::optional(inner.parse()?)),
            "list" => Ok(FieldType::list(inner.parse()?)),
            "enum" => {
                let options: Vec<String> = inner.split('|').map(str::to_owned).collect();
                if options.iter().any(String::is_empty) {
                    return Err(bad());
                }
                Ok(FieldType::Enum(options))
            }
            "tuple" => {
                let items = split_top_level(inner)
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<_>, _>>()?;
                if items.is_empty() {
                    return Err(bad());
                }
                Ok(FieldType::Tuple(items))
            }
            _ => Err(bad()),
        }
    }
}

/// Splits on commas that are not nested inside angle brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// How buffers treat successive messages of a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DedupPolicy {
    /// Never deduplicated; every message is delivered.
    None,
    /// Later messages supersede earlier ones with the same redundancy key.
    ByKey,
    /// Removes every buffered entry addressed to the target subtree.
    PurgePrefix,
}

impl DedupPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            DedupPolicy::None => "none",
            DedupPolicy::ByKey => "by_key",
            DedupPolicy::PurgePrefix => "purge_prefix",
        }
    }
}

impl FromStr for DedupPolicy {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(DedupPolicy::None),
            "by_key" => Ok(DedupPolicy::ByKey),
            "purge_prefix" => Ok(DedupPolicy::PurgePrefix),
            other => Err(SchemaError::BadFieldType(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub ty: FieldType,
}

/// A registered message type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageType {
    pub name: String,
    pub doc: String,
    pub fields: Vec<FieldDef>,
    pub dedup_policy: DedupPolicy,
}

impl MessageType {
    pub fn new(name: &str, dedup_policy: DedupPolicy, doc: &str) -> Self {
        Self {
            name: name.to_owned(),
            doc: doc.to_owned(),
            fields: Vec::new(),
            dedup_policy,
        }
    }

    pub fn field(mut self, name: &str, ty: FieldType) -> Self {
        self.fields.push(FieldDef {
            name: name.to_owned(),
            ty,
        });
        self
    }

    pub fn fields(mut self, defs: impl IntoIterator<Item = (String, FieldType)>) -> Self {
        self.fields
            .extend(defs.into_iter().map(|(name, ty)| FieldDef { name, ty }));
        self
    }

    pub fn field_type(&self, name: &str) -> Option<&FieldType> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.ty)
    }

    /// Checks that a message's payload exactly matches this type.
    pub fn validate(&self, msg: &Message) -> Result<(), SchemaError> {
        for name in msg.fields.keys() {
            if self.field_type(name).is_none() {
                return Err(SchemaError::UnexpectedField {
                    type_name: self.name.clone(),
                    field: name.clone(),
                });
            }
        }
        for def in &self.fields {
            match msg.fields.get(&def.name) {
                None if def.ty.is_optional() => {}
                None => {
                    return Err(SchemaError::MissingField {
                        type_name: self.name.clone(),
                        field: def.name.clone(),
                    })
                }
                // Unset top-level optionals are represented by absence.
                Some(Value::Nil) => {
                    return Err(SchemaError::FieldMismatch {
                        type_name: self.name.clone(),
                        field: def.name.clone(),
                        expected: def.ty.to_string(),
                        got: "nil".into(),
                    })
                }
                Some(v) if !def.ty.accepts(v) => {
                    return Err(SchemaError::FieldMismatch {
                        type_name: self.name.clone(),
                        field: def.name.clone(),
                        expected: def.ty.to_string(),
                        got: v.kind_name().into(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// A typed payload plus its message type name.
#[derive(Debug, Clone, PartialEq)]
pub struct Message {
    pub type_name: String,
    pub fields: BTreeMap<String, Value>,
}

impl Message {
    pub fn new(type_name: &str) -> Self {
        Self {
            type_name: type_name.to_owned(),
            fields: BTreeMap::new(),
        }
    }

    pub fn with(mut self, field: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(field.to_owned(), value.into());
        self
    }

    pub fn set(&mut self, field: &str, value: impl Into<Value>) {
        self.fields.insert(field.to_owned(), value.into());
    }

    pub fn get(&self, field: &str) -> Option<&Value> {
        self.fields.get(field)
    }

    pub fn str_field(&self, field: &str) -> Option<&str> {
        self.get(field).and_then(Value::as_str)
    }

    pub fn int_field(&self, field: &str) -> Option<i64> {
        self.get(field).and_then(Value::as_i64)
    }
}

impl AsRef<Message> for Message {
    fn as_ref(&self) -> &Message {
        self
    }
}

/// An ordered, immutable set of message types.
#[derive(Debug, Clone)]
pub struct Registry {
    types: Vec<MessageType>,
    index: HashMap<String, usize>,
}

impl Registry {
    pub fn new(types: Vec<MessageType>) -> Result<Self, SchemaError> {
        let mut index = HashMap::with_capacity(types.len());
        for (i, ty) in types.iter().enumerate() {
            if index.insert(ty.name.clone(), i).is_some() {
                return Err(SchemaError::DuplicateType(ty.name.clone()));
            }
        }
        Ok(Self { types, index })
    }

    pub fn types(&self) -> &[MessageType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&MessageType> {
        self.index.get(name).map(|&i| &self.types[i])
    }

    pub fn validate(&self, msg: &Message) -> Result<&MessageType, SchemaError> {
        let ty = self
            .get(&msg.type_name)
            .ok_or_else(|| SchemaError::Unregistered(msg.type_name.clone()))?;
        ty.validate(msg)?;
        Ok(ty)
    }
}
