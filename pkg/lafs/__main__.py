from lafs.cli.app import app

app(prog_name="lafs")
