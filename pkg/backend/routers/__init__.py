# CLI subcommands for the branched-cover correspondence calculator