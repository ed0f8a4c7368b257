# Empty file to mark api as a package
