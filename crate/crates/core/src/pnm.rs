//! Binary PGM (P5) and PPM (P6) images with maxval 255.

use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::codec::Image;
use crate::error::{Error, Result};

pub fn decode_pnm(bytes: &[u8]) -> Result<Image> {
    let magic = bytes.get(..2).unwrap_or_default();
    if magic != b"P5" && magic != b"P6" {
        return Err(Error::Format("expected binary PGM (P5) or PPM (P6)".into()));
    }
    let dynamic = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
        .map_err(|e| Error::Format(e.to_string()))?;
    let (w, h) = (dynamic.width() as usize, dynamic.height() as usize);
    match dynamic {
        DynamicImage::ImageLuma8(buf) => Image::new(w, h, 1, buf.into_raw()),
        DynamicImage::ImageRgb8(buf) => Image::new(w, h, 3, buf.into_raw()),
        other => Err(Error::Format(format!(
            "unsupported sample layout {:?}; need 8-bit gray or RGB",
            other.color()
        ))),
    }
}

pub fn encode_pnm(img: &Image) -> Result<Vec<u8>> {
    let (subtype, color) = match img.channels() {
        1 => (
            PnmSubtype::Graymap(SampleEncoding::Binary),
            ExtendedColorType::L8,
        ),
        _ => (
            PnmSubtype::Pixmap(SampleEncoding::Binary),
            ExtendedColorType::Rgb8,
        ),
    };
    let mut out = Cursor::new(Vec::new());
    PnmEncoder::new(&mut out)
        .with_subtype(subtype)
        .write_image(img.pixels(), img.width() as u32, img.height() as u32, color)
        .map_err(|e| Error::Format(e.to_string()))?;
    Ok(out.into_inner())
}

pub fn read_pnm(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_pnm(&bytes)
}
