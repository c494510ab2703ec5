//! Binary field-dump format.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size  content
//! 0       5     magic "GNFI1"
//! 5       1     side: 0 = reflection plane, 1 = transmission plane
//! 6       1     field component j (1, 2, or 3)
//! 7       1     reserved, 0
//! 8       4     N1 (u32)
//! 12      4     N2 (u32)
//! 16      8     period along x (f64)
//! 24      8     period along y (f64)
//! 32      8     z-plane of the samples (f64)
//! 40      16*N1*N2   samples, row-major over (i, j), interleaved (re, im) f64
//! ```

use anyhow::{bail, Context};
use num_complex::Complex64;
use std::io::{Read, Write};

use gnfi_core::inverse::MeasurementSide;
use gnfi_core::spectral::{ComplexGrid, PeriodicGrid};

pub const MAGIC: &[u8; 5] = b"GNFI1";
pub const HEADER_LEN: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub side: MeasurementSide,
    pub component: u8,
    pub n1: u32,
    pub n2: u32,
    pub period: [f64; 2],
    pub z_plane: f64,
    pub samples: Vec<Complex64>,
}

impl FieldDump {
    pub fn from_field(
        field: &ComplexGrid,
        side: MeasurementSide,
        component: u8,
        z_plane: f64,
    ) -> Self {
        let g = field.grid();
        Self {
            side,
            component,
            n1: g.n1() as u32,
            n2: g.n2() as u32,
            period: [g.period1(), g.period2()],
            z_plane,
            samples: field.values().to_vec(),
        }
    }

    pub fn to_field(&self) -> anyhow::Result<ComplexGrid> {
        let grid = PeriodicGrid::new(
            self.period[0],
            self.period[1],
            self.n1 as usize,
            self.n2 as usize,
        )?;
        Ok(ComplexGrid::from_values(grid, self.samples.clone())?)
    }

    pub fn write_to(&self, w: &mut impl Write) -> anyhow::Result<()> {
        let mut header = [0u8; HEADER_LEN];
        header[..5].copy_from_slice(MAGIC);
        header[5] = match self.side {
            MeasurementSide::Reflection => 0,
            MeasurementSide::Transmission => 1,
        };
        header[6] = self.component;
        header[7] = 0;
        header[8..12].copy_from_slice(&self.n1.to_le_bytes());
        header[12..16].copy_from_slice(&self.n2.to_le_bytes());
        header[16..24].copy_from_slice(&self.period[0].to_le_bytes());
        header[24..32].copy_from_slice(&self.period[1].to_le_bytes());
        header[32..40].copy_from_slice(&self.z_plane.to_le_bytes());
        w.write_all(&header)?;
        let mut payload = Vec::with_capacity(self.samples.len() * 16);
        for s in &self.samples {
            payload.extend_from_slice(&s.re.to_le_bytes());
            payload.extend_from_slice(&s.im.to_le_bytes());
        }
        w.write_all(&payload)?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> anyhow::Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header).context("reading dump header")?;
        if &header[..5] != MAGIC {
            bail!("not a field dump: bad magic {:?}", &header[..5]);
        }
        let side = match header[5] {
            0 => MeasurementSide::Reflection,
            1 => MeasurementSide::Transmission,
            other => bail!("unknown side tag {other}"),
        };
        let component = header[6];
        if !(1..=3).contains(&component) {
            bail!("component tag must be 1..=3, got {component}");
        }
        let n1 = u32::from_le_bytes(header[8..12].try_into().unwrap());
        let n2 = u32::from_le_bytes(header[12..16].try_into().unwrap());
        let period = [
            f64::from_le_bytes(header[16..24].try_into().unwrap()),
            f64::from_le_bytes(header[24..32].try_into().unwrap()),
        ];
        let z_plane = f64::from_le_bytes(header[32..40].try_into().unwrap());

        let count = n1 as usize * n2 as usize;
        let mut payload = vec![0u8; count * 16];
        r.read_exact(&mut payload)
            .with_context(|| format!("reading {count} samples"))?;
        let samples = payload
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Ok(Self {
            side,
            component,
            n1,
            n2,
            period,
            z_plane,
            samples,
        })
    }

    pub fn write_file(&self, path: &std::path::Path) -> anyhow::Result<()> {
        let mut f = std::io::BufWriter::new(
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        self.write_to(&mut f)?;
        Ok(())
    }

    pub fn read_file(path: &std::path::Path) -> anyhow::Result<Self> {
        let mut f = std::io::BufReader::new(
            std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?,
        );
        Self::read_from(&mut f)
    }
}
