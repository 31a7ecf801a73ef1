pub mod diff;
pub mod group;
pub mod groupoid;
pub mod linalg;
pub mod nichols;
pub mod presets;
pub mod scalar;
pub mod yd;
