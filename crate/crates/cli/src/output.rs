use std::io::{self, Write};

use serde_json::{json, Value};

use crate::args::Format;

/// Version of the JSON lines layout, written in the header line.
pub const FORMAT_VERSION: u32 = 1;

pub struct Output<W: Write> {
    format: Format,
    sink: W,
}

impl<W: Write> Output<W> {
    pub fn new(format: Format, sink: W) -> Self {
        Self { format, sink }
    }

    pub fn header(&mut self, command: &str) -> io::Result<()> {
        if self.format == Format::Json {
            let header = json!({ "format": "pslsearch", "version": FORMAT_VERSION, "command": command });
            writeln!(self.sink, "{header}")?;
        }
        Ok(())
    }

    /// Writes `value` as one JSON line or `text` verbatim, depending on the format.
    pub fn emit(&mut self, value: &Value, text: impl FnOnce() -> String) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.sink, "{value}"),
            Format::Text => {
                let text = text();
                if text.ends_with('\n') {
                    self.sink.write_all(text.as_bytes())
                } else {
                    writeln!(self.sink, "{text}")
                }
            }
        }
    }

    /// A JSON line only shown in JSON mode.
    pub fn data(&mut self, value: &Value) -> io::Result<()> {
        if self.format == Format::Json {
            writeln!(self.sink, "{value}")?;
        }
        Ok(())
    }

    /// A line only shown in text mode.
    pub fn note(&mut self, text: &str) -> io::Result<()> {
        if self.format == Format::Text {
            writeln!(self.sink, "{text}")?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.sink.flush()
    }
}
