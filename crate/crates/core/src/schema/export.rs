//! Schema documents, hashing and client declaration codegen.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::types::{DedupPolicy, FieldType, Registry};

/// Bumped whenever the document layout itself changes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDescriptor {
    pub name: String,
    pub dedup_policy: String,
    pub fields: Vec<FieldDescriptor>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub doc: String,
}

/// Registry contents in registration order, as exchanged with codegen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaDocument {
    pub version: String,
    pub types: Vec<TypeDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("{type_name}.{field}: cannot map field type {ty:?}")]
    UnmappableType {
        type_name: String,
        field: String,
        ty: String,
    },
    #[error("{type_name}: unknown dedup policy {policy:?}")]
    UnknownPolicy { type_name: String, policy: String },
}

impl SchemaDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema document serializes");
        s.push('\n');
        s
    }

    /// Canonical bytes covered by the hash: names, field names, field types
    /// and dedup policies. Doc strings are excluded.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let stripped = SchemaDocument {
            version: self.version.clone(),
            types: self
                .types
                .iter()
                .map(|t| TypeDescriptor {
                    doc: String::new(),
                    ..t.clone()
                })
                .collect(),
        };
        serde_json::to_vec(&stripped).expect("schema document serializes")
    }
}

pub fn export_schema(registry: &Registry) -> SchemaDocument {
    SchemaDocument {
        version: SCHEMA_VERSION.to_owned(),
        types: registry
            .types()
            .iter()
            .map(|t| TypeDescriptor {
                name: t.name.clone(),
                dedup_policy: t.dedup_policy.as_str().to_owned(),
                fields: t
                    .fields
                    .iter()
                    .map(|f| FieldDescriptor {
                        name: f.name.clone(),
                        ty: f.ty.to_string(),
                    })
                    .collect(),
                doc: t.doc.clone(),
            })
            .collect(),
    }
}

/// SHA-256 of the canonical document bytes, lowercase hex.
pub fn schema_hash(doc: &SchemaDocument) -> String {
    hex::encode(Sha256::digest(doc.canonical_bytes()))
}

/// Emits TypeScript declarations: one interface per message type, a union of
/// all of them, and the schema hash the client must present at handshake.
pub fn generate_client_declarations(doc: &SchemaDocument) -> Result<String, CodegenError> {
    let mut out = String::new();
    out.push_str("// Generated by `scenecast gen-schema`. Do not edit.\n\n");
    let _ = writeln!(out, "export const SCHEMA_HASH = \"{}\";", schema_hash(doc));
    if doc.types.is_empty() {
        return Ok(out);
    }

    for ty in &doc.types {
        ty.dedup_policy
            .parse::<DedupPolicy>()
            .map_err(|_| CodegenError::UnknownPolicy {
                type_name: ty.name.clone(),
                policy: ty.dedup_policy.clone(),
            })?;
        out.push('\n');
        if !ty.doc.is_empty() {
            let _ = writeln!(out, "/** {} */", ty.doc);
        }
        let _ = writeln!(out, "export interface {} {{", ty.name);
        let _ = writeln!(out, "  type: \"{}\";", ty.name);
        for field in &ty.fields {
            let parsed: FieldType =
                field
                    .ty
                    .parse()
                    .map_err(|_| CodegenError::UnmappableType {
                        type_name: ty.name.clone(),
                        field: field.name.clone(),
                        ty: field.ty.clone(),
                    })?;
            match parsed {
                FieldType::Optional(inner) => {
                    let _ = writeln!(out, "  {}?: {};", field.name, ts_type(&inner));
                }
                other => {
                    let _ = writeln!(out, "  {}: {};", field.name, ts_type(&other));
                }
            }
        }
        out.push_str("}\n");
    }

    out.push_str("\nexport type Message =\n");
    for (i, ty) in doc.types.iter().enumerate() {
        let end = if i + 1 == doc.types.len() { ";" } else { "" };
        let _ = writeln!(out, "  | {}{end}", ty.name);
    }
    Ok(out)
}

fn ts_type(ty: &FieldType) -> String {
    match ty {
        FieldType::Bool => "boolean".into(),
        FieldType::Int | FieldType::Float => "number".into(),
        FieldType::String => "string".into(),
        // Little-endian f32 payload; view with `new Float32Array(buf.buffer, ...)`.
        FieldType::Bytes | FieldType::Float32Array => "Uint8Array".into(),
        FieldType::Tuple(items) => format!(
            "[{}]",
            items.iter().map(ts_type).collect::<Vec<_>>().join(", ")
        ),
        FieldType::Optional(inner) => format!("{} | null", ts_type(inner)),
        FieldType::List(inner) => match **inner {
            FieldType::Optional(_) | FieldType::Enum(_) => format!("({})[]", ts_type(inner)),
            _ => format!("{}[]", ts_type(inner)),
        },
        FieldType::Enum(options) => options
            .iter()
            .map(|o| format!("\"{o}\""))
            .collect::<Vec<_>>()
            .join(" | "),
    }
}
