# Experiments module
