pub mod document;
pub mod svg;
pub mod text;
