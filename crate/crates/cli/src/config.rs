use clap::CommandFactory;
use std::fs;

use crate::error::CliError;
use crate::Cli;

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", k + 1)))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Inserts the config file's settings right after the subcommand, so later command-line
/// flags override them.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    if args.len() < 2 {
        return Ok(args);
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    let cmd = Cli::command();
    let sub = cmd
        .find_subcommand(&args[1])
        .ok_or_else(|| CliError::Config(format!("unknown command {:?}", args[1])))?;
    let mut inserted = Vec::new();
    for (key, value) in parse_file(&text)? {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| CliError::Config(format!("{path}: unknown key {key:?} for {}", args[1])))?;
        if key == "config" {
            continue;
        }
        if arg.get_action().takes_values() {
            inserted.push(format!("--{key}={value}"));
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => inserted.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => return Err(CliError::Config(format!("{path}: {key} expects true or false, got {value:?}"))),
            }
        }
    }
    let mut out = args[..2].to_vec();
    out.extend(inserted);
    out.extend(args[2..].iter().cloned());
    Ok(out)
}
