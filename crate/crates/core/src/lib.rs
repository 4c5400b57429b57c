pub mod gates;
pub mod gf2;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod smith;
pub mod stabilizer;
pub mod synthesis;
pub mod verify;
