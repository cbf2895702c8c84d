from .main import app

app(prog_name="index_coding_bounds")
