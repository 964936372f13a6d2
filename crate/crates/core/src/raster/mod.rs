//! Image container, 2D spectra, the cyclic imaging primitives and file I/O.

mod fft;
mod image;
pub mod io;
mod ops;

pub use fft::{spectrum, zero_count, Fft2, Spectrum};
pub use image::Image;
pub use ops::{
    box_axis_dft, box_kernel, box_spectrum, boxsum, cyclic_convolve, decimate, deinterlace,
    interlace, upsample_zero,
};
