//! Per-property type and range declarations shared by scene node kinds and
//! GUI element kinds.

use crate::schema::{FieldType, Value};

/// Range constraint applied to a single property value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropCheck {
    None,
    /// Float strictly greater than zero.
    Positive,
    /// Float strictly inside `(lo, hi)`.
    OpenInterval(f64, f64),
    /// Integer inside `lo..=hi`.
    IntRange(i64, i64),
    /// Three integers in `0..=255`.
    Rgb,
    /// Three floats, each strictly positive.
    PositiveVec3,
    /// Blob or array length must be a multiple of the given count.
    LengthMultipleOf(usize),
    /// List must have at least one element.
    NonEmpty,
}

#[derive(Debug, Clone)]
pub struct PropSpec {
    pub name: &'static str,
    pub ty: FieldType,
    pub check: PropCheck,
    /// Optional properties may be absent from a property map.
    pub optional: bool,
}

impl PropSpec {
    pub fn new(name: &'static str, ty: FieldType) -> Self {
        Self {
            name,
            ty,
            check: PropCheck::None,
            optional: false,
        }
    }

    pub fn check(mut self, check: PropCheck) -> Self {
        self.check = check;
        self
    }

    pub fn optional(mut self) -> Self {
        self.optional = true;
        self
    }

    /// Wire type of the property when carried as a message field.
    pub fn wire_type(&self) -> FieldType {
        if self.optional {
            FieldType::optional(self.ty.clone())
        } else {
            self.ty.clone()
        }
    }

    /// Type, finiteness and range check for one value.
    pub fn validate(&self, value: &Value) -> Result<(), String> {
        if !self.ty.accepts(value) || matches!(value, Value::Nil) {
            return Err(format!(
                "{} expects {}, got {}",
                self.name,
                self.ty,
                value.kind_name()
            ));
        }
        if !value.is_finite() {
            return Err(format!("{} contains a non-finite number", self.name));
        }
        let ok = match self.check {
            PropCheck::None => true,
            PropCheck::Positive => value.as_f64().is_some_and(|x| x > 0.0),
            PropCheck::OpenInterval(lo, hi) => value.as_f64().is_some_and(|x| x > lo && x < hi),
            PropCheck::IntRange(lo, hi) => value.as_i64().is_some_and(|x| (lo..=hi).contains(&x)),
            PropCheck::Rgb => value.as_rgb().is_some(),
            PropCheck::PositiveVec3 => value
                .as_f64_array::<3>()
                .is_some_and(|v| v.iter().all(|x| *x > 0.0)),
            PropCheck::LengthMultipleOf(n) => match value {
                Value::Bytes(b) => b.len() % n == 0,
                Value::Float32Array(v) => v.len() % n == 0,
                _ => false,
            },
            PropCheck::NonEmpty => value.as_list().is_some_and(|l| !l.is_empty()),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{} = {value} violates {:?}", self.name, self.check))
        }
    }
}

/// Looks a property up by name.
pub fn find<'a>(specs: &'a [PropSpec], name: &str) -> Option<&'a PropSpec> {
    specs.iter().find(|s| s.name == name)
}
