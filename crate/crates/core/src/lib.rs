pub mod classic;
pub mod engine;
pub mod frontend;
pub mod interval;
pub mod maxulp;
pub mod minifloat;
pub mod oracle;
