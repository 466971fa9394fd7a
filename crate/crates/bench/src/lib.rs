//! Re-export shim so benches can share helpers later.
pub use floermod_core as core;
