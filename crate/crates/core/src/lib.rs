pub mod decide;
pub mod falsify;
pub mod frontend;
pub mod groebner;
pub mod polyring;
pub mod semialg;
