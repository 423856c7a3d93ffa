from nomuni.main import main

main()
