pub mod abelian;
pub mod constructions;
pub mod covering;
pub mod error;
pub mod formats;
pub mod gog;
pub mod group;
pub mod groupoid;
pub mod limits;
pub mod morita;
pub mod oracle;
pub mod perm;
pub mod selftest;

pub use error::{Error, Result};
