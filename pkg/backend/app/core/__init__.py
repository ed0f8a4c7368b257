# Empty file to mark core as a package
