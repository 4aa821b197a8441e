//! Pure core of the component-reuse studio.
//!
//! Everything here is a value-in, value-out function over in-memory data:
//! the FUI screen-design document and its canonical XML form, the component
//! catalog with reuse statistics, the strict template engine, and the code
//! generator that turns a document plus a template pack into a deterministic
//! artifact tree. File IO, the CLI and the HTTP service live in the `studio`
//! crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod codegen;
pub mod fui;
pub mod names;
pub mod template;

pub use catalog::{Catalog, Category, ComponentDescriptor, ComponentLookup, PropSpec, PropType};
pub use codegen::{generate, GenerationResult, TemplatePack};
pub use fui::{parse_fui, serialize_fui, validate_fui, FuiDocument};
pub use names::{Ident, Slug};
