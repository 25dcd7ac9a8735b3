//! Regenerates `fixtures/*.json` from the built-in models.

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "fixtures".into());
    for (name, doc) in qhfib::catalog::shipped()? {
        let path = format!("{dir}/{name}.json");
        std::fs::write(&path, doc.to_json() + "\n")?;
        println!("{path}");
    }
    Ok(())
}
