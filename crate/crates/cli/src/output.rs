//! Files written by a run: one CSV per boundary, `region.gp` and `meta.json`.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;

use miso_pareto::ChannelConstants;

use crate::benchmark::BenchmarkReport;
use crate::{Args, Computed, Source};

pub fn write_all(dir: &Path, computed: &[Computed]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for c in computed {
        let path = dir.join(format!("{}.csv", c.target.file_stem()));
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        c.boundary
            .write_csv(BufWriter::new(f))
            .with_context(|| format!("writing {}", path.display()))?;
        files.push(path);
    }
    let gp = dir.join("region.gp");
    std::fs::write(&gp, plot_script(computed)).with_context(|| format!("writing {}", gp.display()))?;
    Ok(files)
}

fn plot_script(computed: &[Computed]) -> String {
    let mut s = String::from(
        "# Run `gnuplot region.gp` in this directory to render region.svg.\n\
         set datafile separator ','\n\
         set terminal svg size 800,600\n\
         set output 'region.svg'\n\
         set xlabel 'R_1 [bpcu]'\n\
         set ylabel 'R_2 [bpcu]'\n\
         set xrange [0:*]\n\
         set yrange [0:*]\n\
         set grid\n\
         set key top right\n",
    );
    let lines: Vec<String> = computed
        .iter()
        .map(|c| {
            let style = if c.target == crate::Target::Union { "lines lw 3 dt 2" } else { "lines lw 2" };
            format!("'{}.csv' skip 1 using 2:3 with {style} title '{}'", c.target.file_stem(), c.target.name())
        })
        .collect();
    let _ = writeln!(s, "plot {}", lines.join(", \\\n     "));
    s
}

pub fn write_meta(
    dir: &Path,
    args: &Args,
    k: &ChannelConstants,
    source: &Source,
    computed: &[Computed],
    files: &[PathBuf],
    report: Option<&BenchmarkReport>,
) -> Result<()> {
    let boundaries: Vec<_> = computed
        .iter()
        .zip(files)
        .map(|(c, f)| {
            json!({
                "scenario": c.target.name(),
                "file": f.file_name().map(|n| n.to_string_lossy().into_owned()),
                "method": c.boundary.meta.method,
                "points": c.boundary.len(),
                "grid_points": c.boundary.meta.grid_points,
                "epsilon": c.boundary.meta.epsilon,
                "skipped_samples": c.boundary.meta.skipped_samples,
                "seconds": c.seconds,
            })
        })
        .collect();
    let meta = json!({
        "versions": {
            "miso-pareto": env!("CARGO_PKG_VERSION"),
        },
        "channel": source,
        "constants": k,
        "assumptions": {
            "noise_variances": if source.unit_noise_assumed {
                "preset: sigma1^2 = sigma2^2 = 1"
            } else {
                "taken from the channel source"
            },
            "transmit_power": "unit power budget per transmitter",
        },
        "settings": {
            "M": args.m,
            "epsilon": args.epsilon,
            "parallel": args.parallel,
            "threads": rayon::current_num_threads(),
        },
        "boundaries": boundaries,
        "benchmark": report,
    });
    let path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta)?;
    std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
