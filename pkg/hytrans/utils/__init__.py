from .fileio import (
    config_hash,
    get_tmpdir,
    mkdir_p,
    print_json,
    read_csv,
    read_file,
    read_json,
    staged_output,
    write_csv,
    write_file,
    write_json,
)
