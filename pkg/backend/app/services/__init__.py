# Empty file to mark services as a package
