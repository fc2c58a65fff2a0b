# Subcommands for the lgfnoma CLI
