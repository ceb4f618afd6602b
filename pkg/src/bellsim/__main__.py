from bellsim.cli import main

main()
