int x = 1;
/* this block comment never ends
int y = 2;
