# Value types, reports and run configuration
