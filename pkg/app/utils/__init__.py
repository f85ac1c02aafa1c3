# Logging, errors and output writers
