//! Drive the batch front end in-process: run from a config, then rerun the
//! resolved config it reports.

use critfpp::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("critfpp-batch-example");
    let config = dir.join("arm.toml");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(&config, "command = \"arm\"\nspec = \"open1\"\nn = 8\nsamples = 2000\nseed = 42\n").unwrap();

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["critfpp", "--config", config.to_str().unwrap(), "--format", "json"], &mut out, &mut err);
    println!("exit {code}\n{}", String::from_utf8_lossy(&out));

    let summary = dir.join("summary.json");
    std::fs::write(&summary, &out).unwrap();
    let mut again = Vec::new();
    run(["critfpp", "--config", summary.to_str().unwrap(), "--format", "csv"], &mut again, &mut err);
    print!("{}", String::from_utf8_lossy(&again));
}
