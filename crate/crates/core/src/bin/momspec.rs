use std::process::ExitCode;

use momspec::bench::{
    compute_study_table, emit_csv, emit_csv_to_path, parse_config, plot_script, sweep_table,
    ConfigError, StudyError,
};

fn main() -> ExitCode {
    let config = match parse_config(std::env::args()) {
        Ok(config) => config,
        Err(ConfigError::Usage(e)) => e.exit(),
        Err(e) => {
            eprintln!("momspec: {}", e);
            return ExitCode::from(2);
        }
    };

    let result = (|| -> Result<(), StudyError> {
        let table = compute_study_table(&config)?;
        if let Some(path) = &config.dump_moments_path {
            std::fs::write(path, table.dump_reduced()).map_err(|e| StudyError::Io {
                path: path.clone(),
                source: e,
            })?;
        }
        let records = sweep_table(&config, &table);
        match &config.out_path {
            Some(path) => emit_csv_to_path(&records, path)?,
            None => {
                let stdout = std::io::stdout();
                emit_csv(&records, stdout.lock()).map_err(|e| StudyError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })?;
            }
        }
        if let Some(path) = &config.plot_script_path {
            let csv_name = config
                .out_path
                .as_ref()
                .and_then(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "study.csv".to_string());
            std::fs::write(path, plot_script(&csv_name)).map_err(|e| StudyError::Io {
                path: path.clone(),
                source: e,
            })?;
        }
        Ok(())
    })();

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("momspec: {}", e);
            ExitCode::FAILURE
        }
    }
}
