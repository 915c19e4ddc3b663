//! Wire messages, the batch codec, and the exported schema.
//!
//! The registry is fixed when the crate is built. The same registry drives
//! validation, encoding and the generated client declarations, and its
//! hash is compared at connect time.

mod codec;
mod export;
pub mod messages;
mod types;
mod value;

use std::sync::LazyLock;

pub use codec::{Batch, CodecError};
pub use export::{
    export_schema, generate_client_declarations, schema_hash, CodegenError, FieldDescriptor,
    SchemaDocument, TypeDescriptor, SCHEMA_VERSION,
};
pub use types::{DedupPolicy, FieldDef, FieldType, Message, MessageType, Registry, SchemaError};
pub use value::{Props, Value};

static REGISTRY: LazyLock<Registry> = LazyLock::new(|| {
    Registry::new(messages::all_message_types()).expect("built-in message names are unique")
});

static HASH: LazyLock<String> = LazyLock::new(|| schema_hash(&export_schema(&REGISTRY)));

/// The built-in message registry.
pub fn registry() -> &'static Registry {
    &REGISTRY
}

/// Hash of the built-in registry's schema document.
pub fn builtin_schema_hash() -> &'static str {
    &HASH
}

/// Encodes with the built-in registry.
pub fn encode_batch<M: AsRef<Message>>(seq: u64, messages: &[M]) -> Result<Vec<u8>, CodecError> {
    registry().encode_batch(seq, messages)
}

/// Decodes with the built-in registry.
pub fn decode_batch(frame: &[u8]) -> Result<Batch, CodecError> {
    registry().decode_batch(frame)
}

/// Generated TypeScript for the built-in registry.
pub fn builtin_client_declarations() -> String {
    generate_client_declarations(&export_schema(registry()))
        .expect("built-in field types are all mappable")
}
