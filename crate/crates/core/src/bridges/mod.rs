pub mod lmu;
pub mod nlm;
