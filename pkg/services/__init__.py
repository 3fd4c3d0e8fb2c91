"""Services behind the `opkit` command.

`formats` loads and validates input files, `reports` builds the run
reports, and `suite` holds the fixed acceptance suite.
"""
