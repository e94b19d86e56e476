// Test code generated by atcg
using System;
using NUnit.Framework;

[TestFixture]
public class loginTester_RT {
    private login login;

    [SetUp]
    public void Init() {
        login = new login();
    }

    private void Assert(bool condition, string errorMessage) {
        if (!condition) {
            Console.WriteLine(errorMessage);
            Environment.Exit(1);
        }
    }

    [Test]
    public void Test1() {
        login.enterName(UID);
        login.enterPassword(PSWD);
        login.login(UID, PSWD);
        // expect: valid = true
    }
}
