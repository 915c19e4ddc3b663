//! MessagePack batch framing.
//!
//! A frame is a two-element array `[seq, messages]`. Each message is a
//! string-keyed map holding `"type"` plus its payload fields. Byte blobs are
//! raw binary strings and `float32_array` fields are little-endian `f32`
//! packed into a binary string.
//!
//! Decoding is type-directed and fail-closed: either every message in the
//! frame decodes, or an error is returned and nothing is delivered.

use std::io::Cursor;

use rmp::encode as wr;
use rmpv::Value as Wire;
use thiserror::Error;

use super::types::{FieldType, Message, Registry, SchemaError};
use super::value::Value;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("cannot encode: {0}")]
    Invalid(#[from] SchemaError),
    #[error("malformed frame at byte {offset}: {reason}")]
    Malformed { offset: usize, reason: String },
    #[error("unknown message type {type_name:?} at byte {offset}")]
    UnknownType { type_name: String, offset: usize },
}

fn malformed(offset: usize, reason: impl Into<String>) -> CodecError {
    CodecError::Malformed {
        offset,
        reason: reason.into(),
    }
}

/// A decoded frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    pub seq: u64,
    pub messages: Vec<Message>,
}

impl Registry {
    /// Encodes messages into one frame. Every message is validated first, so
    /// a failure never produces a partial frame.
    pub fn encode_batch<M: AsRef<Message>>(
        &self,
        seq: u64,
        messages: &[M],
    ) -> Result<Vec<u8>, CodecError> {
        let mut types = Vec::with_capacity(messages.len());
        for msg in messages {
            types.push(self.validate(msg.as_ref())?);
        }

        let mut out = Vec::with_capacity(64);
        wr::write_array_len(&mut out, 2).expect("vec write");
        wr::write_uint(&mut out, seq).expect("vec write");
        wr::write_array_len(&mut out, len_u32(messages.len())).expect("vec write");
        for (msg, ty) in messages.iter().zip(types) {
            let msg = msg.as_ref();
            let present: Vec<_> = ty
                .fields
                .iter()
                .filter_map(|def| msg.fields.get(&def.name).map(|v| (&def.name, v)))
                .collect();
            wr::write_map_len(&mut out, len_u32(present.len() + 1)).expect("vec write");
            wr::write_str(&mut out, "type").expect("vec write");
            wr::write_str(&mut out, &msg.type_name).expect("vec write");
            for (name, value) in present {
                wr::write_str(&mut out, name).expect("vec write");
                write_value(&mut out, value);
            }
        }
        Ok(out)
    }

    /// Decodes a frame produced by [`Registry::encode_batch`].
    ///
    /// Fields the registry does not know are skipped, so newer peers may add
    /// optional fields without breaking older decoders.
    pub fn decode_batch(&self, frame: &[u8]) -> Result<Batch, CodecError> {
        let mut rd = Cursor::new(frame);
        let pos = |rd: &Cursor<&[u8]>| rd.position() as usize;

        let envelope_len = rmp::decode::read_array_len(&mut rd)
            .map_err(|e| malformed(pos(&rd), format!("batch envelope: {e}")))?;
        if envelope_len != 2 {
            return Err(malformed(
                0,
                format!("batch envelope has {envelope_len} elements, expected 2"),
            ));
        }
        let at = pos(&rd);
        let seq: u64 = rmp::decode::read_int(&mut rd)
            .map_err(|e| malformed(at, format!("sequence number: {e}")))?;
        let at = pos(&rd);
        let count = rmp::decode::read_array_len(&mut rd)
            .map_err(|e| malformed(at, format!("message list: {e}")))?;

        let mut messages = Vec::with_capacity((count as usize).min(1024));
        for _ in 0..count {
            let start = pos(&rd);
            let raw = rmpv::decode::read_value(&mut rd)
                .map_err(|e| malformed(pos(&rd), format!("message body: {e}")))?;
            messages.push(self.message_from_wire(raw, start)?);
        }
        if pos(&rd) != frame.len() {
            return Err(malformed(
                pos(&rd),
                format!("{} trailing bytes", frame.len() - pos(&rd)),
            ));
        }
        Ok(Batch { seq, messages })
    }

    fn message_from_wire(&self, raw: Wire, offset: usize) -> Result<Message, CodecError> {
        let Wire::Map(entries) = raw else {
            return Err(malformed(offset, "message is not a map"));
        };
        let mut type_name = None;
        let mut rest = Vec::with_capacity(entries.len());
        for (key, value) in entries {
            let Wire::String(key) = key else {
                return Err(malformed(offset, "non-string key in message map"));
            };
            let Some(key) = key.into_str() else {
                return Err(malformed(offset, "key is not valid UTF-8"));
            };
            if key == "type" {
                match value {
                    Wire::String(s) => match s.into_str() {
                        Some(s) => type_name = Some(s),
                        None => return Err(malformed(offset, "\"type\" is not valid UTF-8")),
                    },
                    _ => return Err(malformed(offset, "\"type\" is not a string")),
                }
            } else {
                rest.push((key, value));
            }
        }
        let type_name = type_name.ok_or_else(|| malformed(offset, "message has no \"type\""))?;
        let ty = self
            .get(&type_name)
            .ok_or_else(|| CodecError::UnknownType {
                type_name: type_name.clone(),
                offset,
            })?;

        let mut msg = Message::new(&type_name);
        for (key, value) in rest {
            let Some(field_ty) = ty.field_type(&key) else {
                continue;
            };
            // A nil top-level optional is equivalent to an absent one.
            if field_ty.is_optional() && value.is_nil() {
                continue;
            }
            let value = value_from_wire(field_ty, value).map_err(|reason| {
                malformed(offset, format!("{type_name}.{key}: {reason}"))
            })?;
            msg.fields.insert(key, value);
        }
        ty.validate(&msg)
            .map_err(|e| malformed(offset, e.to_string()))?;
        Ok(msg)
    }
}

fn len_u32(n: usize) -> u32 {
    u32::try_from(n).expect("collection larger than u32::MAX")
}

fn write_value(out: &mut Vec<u8>, value: &Value) {
    match value {
        Value::Nil => wr::write_nil(out).expect("vec write"),
        Value::Bool(b) => wr::write_bool(out, *b).expect("vec write"),
        Value::Int(i) => {
            wr::write_sint(out, *i).expect("vec write");
        }
        Value::Float(f) => wr::write_f64(out, *f).expect("vec write"),
        Value::String(s) => wr::write_str(out, s).expect("vec write"),
        Value::Bytes(b) => wr::write_bin(out, b).expect("vec write"),
        Value::Float32Array(v) => {
            wr::write_bin_len(out, len_u32(v.len() * 4)).expect("vec write");
            out.reserve(v.len() * 4);
            for x in v {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        Value::Tuple(items) | Value::List(items) => {
            wr::write_array_len(out, len_u32(items.len())).expect("vec write");
            for item in items {
                write_value(out, item);
            }
        }
    }
}

fn value_from_wire(ty: &FieldType, raw: Wire) -> Result<Value, String> {
    let mismatch = |raw: &Wire| format!("expected {ty}, got {}", wire_kind(raw));
    match ty {
        FieldType::Bool => raw.as_bool().map(Value::Bool).ok_or_else(|| mismatch(&raw)),
        FieldType::Int => match &raw {
            Wire::Integer(i) => i.as_i64().map(Value::Int).ok_or_else(|| "int overflow".into()),
            _ => Err(mismatch(&raw)),
        },
        // Peers without a float/int distinction send integral floats as ints.
        FieldType::Float => match &raw {
            Wire::F64(f) => Ok(Value::Float(*f)),
            Wire::F32(f) => Ok(Value::Float(f64::from(*f))),
            Wire::Integer(i) => i
                .as_f64()
                .map(Value::Float)
                .ok_or_else(|| mismatch(&raw)),
            _ => Err(mismatch(&raw)),
        },
        FieldType::String => match raw {
            Wire::String(s) => s
                .into_str()
                .map(Value::String)
                .ok_or_else(|| "invalid UTF-8".into()),
            other => Err(mismatch(&other)),
        },
        FieldType::Enum(options) => match raw {
            Wire::String(s) => {
                let s = s.into_str().ok_or("invalid UTF-8")?;
                if options.contains(&s) {
                    Ok(Value::String(s))
                } else {
                    Err(format!("{s:?} is not one of {options:?}"))
                }
            }
            other => Err(mismatch(&other)),
        },
        FieldType::Bytes => match raw {
            Wire::Binary(b) => Ok(Value::Bytes(b)),
            other => Err(mismatch(&other)),
        },
        FieldType::Float32Array => match raw {
            Wire::Binary(b) => {
                if b.len() % 4 != 0 {
                    return Err(format!("float32 blob length {} not a multiple of 4", b.len()));
                }
                Ok(Value::Float32Array(
                    b.chunks_exact(4)
                        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                        .collect(),
                ))
            }
            other => Err(mismatch(&other)),
        },
        FieldType::Tuple(types) => match raw {
            Wire::Array(items) if items.len() == types.len() => types
                .iter()
                .zip(items)
                .map(|(t, v)| value_from_wire(t, v))
                .collect::<Result<_, _>>()
                .map(Value::Tuple),
            Wire::Array(items) => Err(format!(
                "expected {}-tuple, got {} elements",
                types.len(),
                items.len()
            )),
            other => Err(mismatch(&other)),
        },
        FieldType::List(inner) => match raw {
            Wire::Array(items) => items
                .into_iter()
                .map(|v| value_from_wire(inner, v))
                .collect::<Result<_, _>>()
                .map(Value::List),
            other => Err(mismatch(&other)),
        },
        FieldType::Optional(inner) => {
            if raw.is_nil() {
                Ok(Value::Nil)
            } else {
                value_from_wire(inner, raw)
            }
        }
    }
}

fn wire_kind(v: &Wire) -> &'static str {
    match v {
        Wire::Nil => "nil",
        Wire::Boolean(_) => "bool",
        Wire::Integer(_) => "int",
        Wire::F32(_) | Wire::F64(_) => "float",
        Wire::String(_) => "string",
        Wire::Binary(_) => "binary",
        Wire::Array(_) => "array",
        Wire::Map(_) => "map",
        Wire::Ext(..) => "ext",
    }
}
